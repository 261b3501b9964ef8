# %% [markdown]
# # Over the integers, and the weak-equivalence normal form
#
# Over Z the same reductions run on lattices.  Take `E = 2`, `A = 1` on Z:
# observation replaces Z by 2Z, then 4Z, and so on.  The chain never
# stabilizes, and the index is reported as a lower bound.

# %%
from kronred import PencilSystem, indices, resolvent, observe

z = PencilSystem.integer([[2]], [[1]])
print(observe(z, 3).U.top.basis.to_rows())
print(indices(z).obs_index, indices(z).ctl_index)

# %% [markdown]
# `2 lam + 1` is a unit of Z only at `lam = 0` and `lam = -1`.

# %%
r = resolvent(z)
print(r.kind, r.certificate)

# %% [markdown]
# Torsion shows up as soon as relations are present.

# %%
from kronred import IntMatrix
rel = IntMatrix.from_rows([[4]])
t = PencilSystem.integer([[2]], [[1]], rel, rel)
print(t.domain_invariant, observe(t).domain_invariant, observe(t, 2).domain_invariant)

# %% [markdown]
# Back over Q: the weak-equivalence group `(P, Q, R)` acts by
# `(E, A) -> (P^-1 E Q, P^-1 (E R + A Q))`.  Three numbers classify the
# orbit, and `normal_form` returns a representative with a witness.

# %%
import random
from kronred import invariants, normal_form, act
from kronred.samples import random_rational_system, random_weak_transform

rng = random.Random(3)
sys_ = random_rational_system(rng, max_dim=6)
m, n = sys_.E.shape
other = act(random_weak_transform(rng, m, n), sys_)
print(invariants(sys_), invariants(other))
canon, witness = normal_form(other)
print(canon.E.to_strings())
print(canon.A.to_strings())
print(act(witness, other).E == canon.E)
