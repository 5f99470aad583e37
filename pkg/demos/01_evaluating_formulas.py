"""
Evaluating modal formulas on a finite Kripke model
==================================================

"""

# A Kripke model is a directed graph of worlds plus a valuation saying at
# which worlds each atom is true.  Build one with two worlds: today (t)
# can become tomorrow (m), and tomorrow repeats forever.
from modalkit import Frame, PropModel, evaluate, parse

frame = Frame(("t", "m"), access=(("t", "m"), ("m", "m")))
model = PropModel(frame, {"rain": ("m",)})

# Formulas are written in plain ASCII: [] is "necessarily" (at every
# accessible world), <> is "possibly" (at some accessible world).
print(evaluate(model, parse("rain"), "t"))        # False - dry today
print(evaluate(model, parse("<>rain"), "t"))      # True  - rain can come
print(evaluate(model, parse("[]rain"), "t"))      # True  - it must come
print(evaluate(model, parse("[]<>rain"), "t"))    # True

# The same text parses from Unicode symbols, and every formula renders in
# three formats.  ascii and unicode output always parse back to the same
# tree.
from modalkit import render

f = parse("□rain ⊃ ◇rain")
print(render(f, "ascii"))     # []rain => <>rain
print(render(f, "unicode"))   # □rain => <>rain
print(render(f, "latex"))     # \Box rain \supset \Diamond rain

# Validity is truth at every world.  A Verdict carries the least failing
# world when it does not hold.
from modalkit import valid

print(valid(model, parse("<>rain")).holds)        # True
v = valid(model, parse("rain"))
print(v.holds, v.world)                           # False t

# Two classical equivalences, checkable world by world: possibility is the
# dual of necessity, and strict implication |> is boxed material
# implication.
for w in model.worlds:
    assert evaluate(model, parse("<>rain"), w) == \
        evaluate(model, parse("~[]~rain"), w)
    assert evaluate(model, parse("rain |> <>rain"), w) == \
        evaluate(model, parse("[](rain => <>rain)"), w)
print("dualities verified at every world")

# Schematic validity quantifies a metavariable (uppercase initial) over
# every set of worlds: "[]P => P" fails here because t is not accessible
# from itself, and the verdict names a refuting instantiation.
from modalkit import scheme_valid

v = scheme_valid(model, parse("[]P => P"))
print(v.holds, v.world, dict(v.assignment))       # False t {'P': ('m',)}
