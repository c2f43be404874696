#!/usr/bin/env python3
"""Regenerates data/sample_reports.csv.

Deterministic (fixed seed): 167 rows shaped like a crash-report database
export, 96 autonomous + 18 transition + 53 conventional, with narrative
themes spread over stopped rear-ends, right-turn-lane rear-ends, overtake
sideswipes, manual-takeover transitions and left-turn crashes.
"""

import csv
import random
from datetime import date, timedelta
from pathlib import Path

SEED = 20160914
OUT = Path(__file__).resolve().parent.parent / "data" / "sample_reports.csv"

MAKES = [
    ("Waymo", "Pacifica"), ("Cruise", "Bolt"), ("Zoox", "Highlander"),
    ("Waymo", "Lexus RX"), ("Cruise", "Volt"), ("Pony", "Tucson"),
]
CITIES = ["Mountain View", "San Francisco", "Palo Alto", "Sunnyvale", "San Jose"]
STREETS = [
    "El Camino Real", "Shoreline Boulevard", "Rengstorff Avenue", "Bryant Street",
    "Castro Street", "Valencia Street", "Market Street", "Middlefield Road",
]
WEATHER = ["clear", "cloudy", "rain", "fog"]
LIGHTING = ["daylight", "dusk", "dark with street lights"]
ROADWAY = ["dry", "wet"]

# (mode, motion, crash_type, object_struck, templates)
THEMES = {
    "stopped_rear": (
        "autonomous", "stopped", "rear_end", "vehicle",
        [
            "The {make} {model} was operating in autonomous mode and stopped at a red "
            "traffic light on {street} in {city}, when another vehicle approaching from "
            "behind failed to brake and made contact with its rear bumper. The impact was "
            "minor, and both vehicles sustained scratches to their bumpers.",
            "While stopped in a line of traffic at the intersection of {street}, the "
            "autonomous vehicle was struck from behind by a sedan. The {make} {model} "
            "sustained minor damage to the rear bumper, and the sedan had minor damage to "
            "its front bumper.",
            "The AV was stationary at a stop sign on {street} waiting for cross traffic to "
            "clear when a pickup truck rolled forward and bumped its rear bumper. Damage "
            "was limited to paint scratches on the bumper covers.",
            "Stopped for a red light on {street} in {city}, the {make} {model} was rear "
            "ended at low speed by a delivery van. The van driver reported that their foot "
            "slipped off the brake pedal.",
        ],
    ),
    "turn_lane_rear": (
        "autonomous", "moving", "rear_end", "vehicle",
        [
            "The {make} {model}, operating in autonomous mode, was creeping forward in the "
            "right turn lane from {street} onto {street2} when it braked for a pedestrian "
            "in the crosswalk and the car behind struck its rear bumper at about {speed} "
            "mph. Both vehicles pulled over and the drivers exchanged information.",
            "While merging from the right turn lane on {street}, the AV slowed to yield to "
            "oncoming traffic and was rear ended by the following vehicle. The contact "
            "occurred at approximately {speed} mph and left scuffs on the rear fascia.",
            "The autonomous vehicle was proceeding slowly in the right turn pocket at "
            "{street} and {street2} in {city}. It stopped to yield for a cyclist, and a "
            "hatchback behind it failed to stop in time, tapping the rear bumper.",
            "Approaching the right turn at {street}, the {make} {model} decelerated for a "
            "yellow light and the trailing car bumped it from behind at roughly {speed} "
            "mph. No airbags deployed.",
        ],
    ),
    "overtake_swipe": (
        "autonomous", "moving", "sideswipe", "motorcycle",
        [
            "The {make} {model} was travelling in the left lane of {street} in autonomous "
            "mode when a motorcycle lane splitting between lanes scraped along its left "
            "side mirror and door panel while overtaking. The motorcycle rider kept "
            "upright and both parties stopped at the curb.",
            "While the AV was passing slower traffic on {street}, a motorcycle attempted "
            "to overtake on the left and sideswiped the quarter panel of the {make} "
            "{model}. Paint transfer marks ran along the driver side doors.",
            "A motorcycle overtaking the autonomous vehicle near {street} and {street2} "
            "misjudged the gap and swiped the side of the AV, folding its left mirror. "
            "The rider was uninjured and declined medical attention.",
            "During an overtake on {street}, the adjacent car drifted across the lane "
            "line and sideswiped the {make} {model} along its left side, scraping both "
            "doors. Both vehicles moved to the shoulder.",
        ],
    ),
    "transition": (
        "transition", "moving", "other", "vehicle",
        [
            "The {make} {model} was in autonomous mode on {street} when the system alerted "
            "the test driver, who took manual control seconds before another vehicle cut "
            "in sharply. During the transition to manual driving the AV made contact with "
            "the cutting-in car, scuffing its front fender.",
            "The test driver took over manual control of the {make} {model} as it "
            "approached double parked cars on {street}. Immediately after the takeover, "
            "while braking in manual mode, the vehicle behind struck the rear bumper.",
            "After the automated driving system requested a takeover near {street} and "
            "{street2}, the driver assumed manual control and swerved, making light "
            "contact with a vehicle in the adjacent lane. The disengagement and the "
            "contact occurred within the same few seconds.",
            "While transitioning from autonomous to manual mode at the request of the "
            "safety driver, the {make} {model} braked hard on {street} and was struck "
            "from behind. The driver had taken control moments before the impact.",
        ],
    ),
    "left_turn": (
        "autonomous", "stopped", "left_turn", "vehicle",
        [
            "The {make} {model} was waiting in the intersection of {street} and {street2} "
            "for oncoming traffic to clear before making a left turn when another vehicle "
            "attempting to pass on the right made contact with its right rear corner, "
            "causing damage to the rear bumper.",
            "While yielding for a left turn from {street} in {city}, the autonomous "
            "vehicle was clipped on the right rear quarter by a car overtaking the queue. "
            "Both vehicles completed the turn and stopped.",
            "The AV, stopped and signalling a left turn onto {street2}, was struck on the "
            "right rear corner by a vehicle squeezing past the turn lane. The contact "
            "cracked the bumper cover.",
            "Waiting for a gap in oncoming traffic to turn left at {street} and "
            "{street2}, the {make} {model} was touched on its rear corner by a passing "
            "pickup. The impact was minor and no one was hurt.",
        ],
    ),
    "conventional": (
        "conventional", "moving", "other", "vehicle",
        [
            "The {make} {model} was being driven manually in conventional mode on "
            "{street} when it struck a parked car while changing lanes. The safety driver "
            "was in full control at the time of the crash.",
            "While operated manually in conventional mode, the {make} {model} backed into "
            "a pole in a parking lot off {street} in {city}. The AV system was disengaged "
            "during the entire trip.",
            "The vehicle, under manual control in conventional mode, rear ended a sedan "
            "in stop and go traffic on {street}. The automated driving system was not "
            "active.",
            "Driving in conventional mode on {street}, the {make} {model} sideswiped a "
            "van during a lane change. The human driver had been in control since the "
            "start of the trip.",
        ],
    ),
}

PLAN = (
    [("stopped_rear",)] * 30
    + [("turn_lane_rear",)] * 26
    + [("overtake_swipe",)] * 20
    + [("left_turn",)] * 20
    + [("transition",)] * 18
    + [("conventional",)] * 53
)

CLOSERS = [
    " Police were called to the scene, and insurance information was exchanged "
    "between the parties.",
    " The parties exchanged information, and no police report was filed.",
    " A police report was filed, and both vehicles were driven from the scene.",
    " No injuries were reported by either driver.",
    "",
]

MOVEMENT = {
    "stopped_rear": "stopped in traffic",
    "turn_lane_rear": "making right turn",
    "overtake_swipe": "proceeding straight",
    "transition": "proceeding straight",
    "left_turn": "making left turn",
    "conventional": "proceeding straight",
}


def main():
    rng = random.Random(SEED)
    plan = list(PLAN)
    rng.shuffle(plan)

    start = date(2016, 9, 1).toordinal()
    end = date(2019, 3, 31).toordinal()

    rows = []
    for i, (theme,) in enumerate(plan):
        mode, motion, crash_type, struck, templates = THEMES[theme]
        make, model = rng.choice(MAKES)
        street = rng.choice(STREETS)
        street2 = rng.choice([s for s in STREETS if s != street])
        city = rng.choice(CITIES)
        speed = rng.choice([3, 5, 7, 10, 12, 15])
        narrative = rng.choice(templates).format(
            make=make, model=model, street=street, street2=street2, city=city, speed=speed
        ) + rng.choice(CLOSERS)

        d = date.fromordinal(rng.randint(start, end))
        recent = d >= date(2018, 4, 1)
        # a sprinkling of unannotated motion values
        motion_out = motion if rng.random() > 0.05 else ""
        rows.append({
            "report_id": f"CDMV-{i + 1:04d}",
            "crash_date": d.isoformat(),
            "crash_time": f"{rng.randint(6, 21):02d}:{rng.choice([0, 15, 30, 45]):02d}",
            "manufacturer": make,
            "make": make,
            "model": model,
            "year": rng.randint(2015, 2019),
            "city": city,
            "street": street,
            "movement_preceding": MOVEMENT[theme],
            "weather": rng.choice(WEATHER) if recent else "",
            "lighting": rng.choice(LIGHTING) if recent else "",
            "roadway": rng.choice(ROADWAY) if recent else "",
            "object_struck": struck if theme != "conventional" else rng.choice(
                ["vehicle", "vehicle", "pedestrian", "cyclist", "other"]),
            "injuries": rng.choice(["none", "none reported", "minor"]),
            "mode": mode,
            "motion": motion_out,
            "crash_type": crash_type,
            "narrative": narrative,
        })

    # one narrative with an embedded newline to exercise the CSV reader
    for row in rows:
        if row["mode"] == "conventional":
            row["narrative"] = row["narrative"] + "\nSupplement: the facility gate camera recorded the contact."
            break

    fields = list(rows[0].keys())
    with OUT.open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    modes = [r["mode"] for r in rows]
    print(f"wrote {OUT} ({len(rows)} rows: "
          f"{modes.count('autonomous')} autonomous, {modes.count('transition')} transition, "
          f"{modes.count('conventional')} conventional)")


if __name__ == "__main__":
    main()
