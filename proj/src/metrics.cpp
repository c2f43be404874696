#include "crashtopics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "crashtopics/errors.hpp"

namespace crashtopics {

namespace {

constexpr double kLogFloor = 1e-12;

double kl_floored(const std::vector<double>& p, const std::vector<double>& q) {
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        kl += p[i] * (std::log(std::max(p[i], kLogFloor)) -
                      std::log(std::max(q[i], kLogFloor)));
    }
    return kl;
}

double js_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    double js = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) js += 0.5 * p[i] * std::log(p[i] / m);
        if (q[i] > 0.0) js += 0.5 * q[i] * std::log(q[i] / m);
    }
    return js;
}

}  // namespace

double metric_griffiths(const std::vector<double>& loglik_samples) {
    if (loglik_samples.empty()) {
        throw InputError("griffiths metric needs at least one likelihood sample");
    }
    // logsumexp over -ll_s
    double m = -loglik_samples[0];
    for (double ll : loglik_samples) m = std::max(m, -ll);
    double sum = 0.0;
    for (double ll : loglik_samples) sum += std::exp(-ll - m);
    const double lse = m + std::log(sum);
    return std::log(static_cast<double>(loglik_samples.size())) - lse;
}

double metric_cao_juan(const std::vector<std::vector<double>>& phi) {
    const std::size_t K = phi.size();
    if (K < 2) throw InputError("cao_juan metric needs K >= 2");
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i + 1; j < K; ++j) {
            double dot = 0.0, ni = 0.0, nj = 0.0;
            for (std::size_t v = 0; v < phi[i].size(); ++v) {
                dot += phi[i][v] * phi[j][v];
                ni += phi[i][v] * phi[i][v];
                nj += phi[j][v] * phi[j][v];
            }
            total += dot / std::sqrt(ni * nj);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

double metric_arun(const std::vector<std::vector<double>>& phi,
                   const std::vector<std::vector<double>>& theta,
                   const std::vector<std::size_t>& doc_lengths) {
    const std::size_t K = phi.size();
    if (K == 0) throw InputError("arun metric needs K >= 1");
    const std::size_t V = phi[0].size();
    const std::size_t D = theta.size();
    if (doc_lengths.size() != D) throw InputError("doc_lengths misaligned with theta");
    for (const auto& row : theta) {
        if (row.size() != K) throw InputError("theta row length disagrees with phi");
    }

    Eigen::MatrixXd m(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(V));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t v = 0; v < V; ++v) {
            m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(v)) = phi[k][v];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();

    std::vector<double> cm1(K, 0.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i) cm1[static_cast<std::size_t>(i)] = sv(i);
    std::sort(cm1.begin(), cm1.end(), std::greater<double>());
    double s1 = 0.0;
    for (double x : cm1) s1 += x;
    for (double& x : cm1) x /= s1;

    std::vector<double> cm2(K, 0.0);
    for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t k = 0; k < K; ++k) {
            cm2[k] += static_cast<double>(doc_lengths[d]) * theta[d][k];
        }
    }
    std::sort(cm2.begin(), cm2.end(), std::greater<double>());
    double s2 = 0.0;
    for (double x : cm2) s2 += x;
    if (s2 <= 0.0) throw InputError("arun metric needs positive document mass");
    for (double& x : cm2) x /= s2;

    return kl_floored(cm1, cm2) + kl_floored(cm2, cm1);
}

double metric_deveaud(const std::vector<std::vector<double>>& phi) {
    const std::size_t K = phi.size();
    if (K < 2) throw InputError("deveaud metric needs K >= 2");
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i + 1; j < K; ++j) {
            total += js_divergence(phi[i], phi[j]);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

}  // namespace crashtopics
