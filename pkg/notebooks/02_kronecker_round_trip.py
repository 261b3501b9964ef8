# %% [markdown]
# # Recovering a Kronecker structure
#
# `assemble` builds a block-diagonal pencil from block counts and hides it
# behind random unimodular changes of basis.  The analysis then reads the
# counts back from the defect sequences alone.

# %%
from kronred import StructureSpec, assemble, analyze, delta_chain

spec = StructureSpec(nilpotent_blocks={1: 1, 3: 1}, l_blocks={0: 1, 2: 1},
                     lt_blocks={1: 1}, core_dim=2, seed=42)
built = assemble(spec)
print("shape", spec.shape)
for row in built.system.E.to_strings():
    print(" ".join(f"{x:>3}" for x in row))

# %%
rep = analyze(built.system)
print("alpha   ", rep.defects.alpha)
print("beta_obs", rep.defects.beta_obs)
print("beta_ctl", rep.defects.beta_ctl)
print("indices ", rep.indices.obs_index, rep.indices.ctl_index)

# %% [markdown]
# `alpha[j-1]` counts nilpotent blocks of size `j`, `beta_obs[k]` counts
# `L_k` blocks and `beta_ctl[k]` counts `L_k^T` blocks.  What is left after
# all reductions is the core, where `E` is invertible.

# %%
print(rep.kronecker.counts())
print(rep.kronecker.counts() == spec.counts())
print("core E", rep.kronecker.core_E.to_strings())
print("core A", rep.kronecker.core_A.to_strings())

# %% [markdown]
# The core's finite spectrum is where the pencil stops being invertible.
# With blocks `L` and `L^T` present, though, the pencil is singular and the
# resolvent set is empty.

# %%
print(rep.resolvent.kind, rep.resolvent.blocking_defect)
print("delta chain (dU, dW):", delta_chain(built.system))
