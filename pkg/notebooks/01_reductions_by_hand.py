# %% [markdown]
# # Observation and control reductions, one step at a time
#
# A system is a pair of matrices `E, A` with the same shape.  Observation
# keeps the part of the domain that `A` sends into the image of `E`;
# control divides out the kernel of `E`.  Every reduced space is stored as
# a subquotient of the original domain or codomain, so nothing is lost.

# %%
from kronred import PencilSystem, make_block, observe, control, reduce_grid
from kronred.reduction import observe_reduce, control_reduce, pline, rline, prline

E, A = make_block("N", 2)
nil = PencilSystem.rational(E, A)
print(E.to_strings(), A.to_strings())

# %% [markdown]
# The three defect maps of the nilpotent block.  `pline` is `A` followed by
# the projection onto `coker E`, `rline` is `A` on `ker E`, and `prline` does both.

# %%
print("pline ", pline(nil).to_strings())
print("rline ", rline(nil).to_strings())
print("prline", prline(nil).to_strings())

# %% [markdown]
# One observation step leaves a 1x1 system `([0], [1])`.  None of the defects
# show up yet: they appear one level further down.

# %%
out = observe_reduce(nil)
print(out.reduced, out.reduced.E.to_strings(), out.reduced.A.to_strings())
print("coker pline", out.pline_coker, "| im prline", out.prline_image)
print("next level im prline:", observe_reduce(out.reduced).prline_image)

# %% [markdown]
# An `L_1` block loses its whole domain to observation, while control
# leaves it alone because `E` is injective.

# %%
l1 = PencilSystem.rational(*make_block("L", 1))
print(observe(l1), observe(l1, 2))
print("control changes it?", control_reduce(l1).changed)

# %% [markdown]
# The two reductions commute.  `reduce_grid` builds all mixed reductions
# and checks that both orders give the same subquotients.

# %%
grid = reduce_grid(nil, 2, 2)
for row in grid:
    print([(c.codomain_invariant, c.domain_invariant) for c in row])
