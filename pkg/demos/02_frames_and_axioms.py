"""
Frame properties and the axiom schemes they validate
====================================================

"""

# A scheme is frame-valid when it holds at every world under every
# valuation.  Which schemes are frame-valid depends only on the shape of
# the accessibility relation, and the classical axioms pair up exactly
# with first-order properties of that relation:
#
#   T  []P => P        reflexive
#   4  []P => [][]P    transitive
#   B  P => []<>P      symmetric
#   D  []P => <>P      serial
#   5  <>P => []<>P    euclidean
from modalkit import Frame, axiom_report, frame_valid, parse

equiv = Frame(("a", "b"),
              (("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")))
chain = Frame(("a", "b"), (("a", "b"), ("b", "b")))

print(frame_valid(equiv, parse("[]P => P")).holds)   # True: reflexive
print(frame_valid(chain, parse("[]P => P")).holds)   # False: a misses a

# axiom_report checks every axiom both ways on one frame - schematically
# and via the relation property - and flags any disagreement as
# inconsistent (there are never any).
rep = axiom_report(chain)
print(rep["properties"])
for axiom_id, entry in rep["axioms"].items():
    print(f"{axiom_id:3} holds={entry['holds']} "
          f"consistent={entry['consistent']}")

# When a scheme fails, refute_on_frame returns the least refuting
# valuation and world.  For T on the chain: make P true everywhere except
# the irreflexive world a, so []P holds at a but P does not.
from modalkit import refute_on_frame

valuation, world = refute_on_frame(chain, parse("[]P => P"))
print(valuation, world)                              # {'P': ('b',)} a

# K ("[](P => Q) => ([]P => []Q)") and the necessitation rule hold on
# every frame whatsoever - verify it over all 512 three-world frames.
from modalkit import axiom_scheme
from modalkit.search import enumerate_frames

assert all(frame_valid(fr, axiom_scheme("K")).holds
           for fr in enumerate_frames(3))
print("K is frame-valid on all 512 three-world frames")

# enumerate_frames can filter by property and collapse relabelings: the 16
# two-world frames fall into 10 isomorphism classes.
print(len(list(enumerate_frames(2, dedup=True))))    # 10
print(len(list(enumerate_frames(2, ["symmetric"])))) # 8
