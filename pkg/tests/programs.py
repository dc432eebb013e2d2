"""Reference program texts shared across the test suite."""

# Reactive obstacle avoidance: radar rays vote for their angle, weighted by
# distance, so the robot steers toward open space.
OPEN_FIELD_PROGRAM = """\
FreedomMotion(radar) = WeightedAverage {
  x.distance -> x.angle :- x in radar
};
Robot(robot_name:, desire:, memory: "I am a robot") :-
  Sensor(robot_name:, sensor:),
  freedom = FreedomMotion(sensor.radar),
  speed = 0.5,
  desire = {
    left_engine:  speed - freedom + 0.1,
    right_engine: speed + freedom
  };
"""

# One step of shortest-path relaxation over a beacon graph: keep the previous
# distance, anchor "Home" at zero, or route through a neighbor.
DISTANCE_RELAXATION_PROGRAM = """\
PosteriorHomeDistance(beacon) Min= d :-
  d == HomeDistance(beacon) |
  d == 0, beacon == "Home"  |
  d == HomeDistance(neighbor) + D(neighbor, beacon);
"""
