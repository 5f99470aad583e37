"""
Quantifiers across worlds: constant and varying domains
=======================================================

"""

# First-order modal logic adds quantifiers, predicates and equality on top
# of the modal connectives.  Each world carries a set of existing
# individuals; quantifiers range over the local inhabitants, while terms
# keep denoting even where their bearer does not exist.
from modalkit import (DomainFrame, FlexiblePred, FoModel, Frame, evaluate,
                      parse)

frame = Frame(("now", "later"), (("now", "later"),))

# One individual, a, that exists now but not later: a shrinking domain.
dframe = DomainFrame(frame, domain=("a",),
                     exists_in={"now": ["a"], "later": []})
model = FoModel(dframe, "varying",
                flexible_preds={"alive": FlexiblePred(
                    1, {"now": {("a",)}, "later": set()})})

# De dicto vs de re: "necessarily, everything is alive" is vacuously true
# later (nothing exists there), but "everything is necessarily alive"
# fails now - a is a counterexample.
print(evaluate(model, parse("[](forall x. alive(x))"), "now"))   # True
print(evaluate(model, parse("forall x. []alive(x)"), "now"))     # False

# That contrast is exactly the Converse Barcan Formula failing on a
# shrinking domain.  The two exchange schemes are:
#
#   BF   (forall x. []P(x)) => [] forall x. P(x)   needs nonincreasing
#   CBF  [](forall x. P(x)) => forall x. []P(x)    needs nondecreasing
#
# fo_scheme_valid quantifies the hole P over every interpretation.
from modalkit import BF_SCHEME, CBF_SCHEME, fo_scheme_valid

print(fo_scheme_valid(model, BF_SCHEME, "P").holds)      # True
v = fo_scheme_valid(model, CBF_SCHEME, "P")
print(v.holds, v.world, v.interpretation)                # False now ()

# barcan_report pairs both schemes with domain monotonicity the way
# axiom_report pairs axioms with frame properties.
from modalkit import barcan_report

rep = barcan_report(dframe)
print(rep["monotonicity"])
print(rep["axioms"]["BF"]["holds"], rep["axioms"]["CBF"]["holds"])

# With constant domains both schemes are valid, and the implication
# reading agrees with the rule reading ("if the left side is valid, so is
# the right").  On varying domains the two readings can come apart:
# bf_readings reports all four gradations on one model.
from modalkit import bf_readings

loop = Frame(("w0", "w1"), (("w0", "w0"), ("w1", "w0")))
diverging = FoModel(DomainFrame(loop, ("a",),
                                {"w0": ["a"], "w1": []}), "varying")
r = bf_readings(diverging)
print(r.pointwise, r.meta_iff, r.meta_implies, r.object_implies)
# False True True False: a sound rule, yet an invalid formula.
