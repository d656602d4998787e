"""Driving the network by hand with fixed sensor frames.

Shows the drive feedback building up, a remembered percept fading once it
leaves view, and a reflex taking over from a weaker motivated action.
"""

from ibenet import CongruenceBehaviour, NetworkConfig, Percept, SensorFrame, reset

drives = [
    CongruenceBehaviour("hunger", {"food": 1.0, "grass": 0.5}),
    CongruenceBehaviour("thirst", {"water": 1.0}),
]
net = reset(NetworkConfig(drives=drives, alpha=0.0))

food = Percept("food", 0.6, bearing=0.3, distance=8.0, source="f1")
blob = Percept("blob", 0.9, bearing=-1.0, distance=3.0, source="b1")
needs = {"hunger": 0.5, "thirst": 0.1, "fatigue": 0.0}

frames = [[food]] * 3 + [[]] * 3 + [[food, blob]]
for percepts in frames:
    action, r = net.step(SensorFrame(percepts, needs))
    mem = [(p.key, round(p.certainty, 3), p.age) for p in r.persistents]
    print(
        f"tick {r.tick}: o_d={r.o_d['hunger']:.3f} C={r.congruent['hunger']:.3f} "
        f"pref={r.preference} -> {action.label:<16} memory={mem}"
    )

