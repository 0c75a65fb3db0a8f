# %% [markdown]
# A theory of rank 2: the closure needs two steps before the type can no
# longer be omitted.

# %%
from omitting.closure import ClosureState, closure_step, is_isolated, is_strongly_isolated
from omitting.families import rank2_example, rank2_pool, type_p
from omitting.logic import format_formula
from omitting.schematic import project

theory = rank2_example()
ptype = type_p()    # U_0(x), U_1(x), ...
pool = rank2_pool()  # P(x) and every Q_j(x)

for s in theory.sentences:
    print("sentence ", format_formula(s))
for schema in theory.schemas:
    print("schema   ", schema.text, f"[{schema.range.value}]")

# %%
# the schemas seen through the signature P, Q_0, U_0, U_1
proj = project(theory, {"P": {None}, "Q": {0}, "U": {0, 1}})
for s in proj.sentences:
    print(format_formula(s))
print("plus", len(proj.constraints), "core constraint and", len(proj.obligations), "obligations")

# %%
state = ClosureState.start(theory, ptype, pool)
print("isolated by", format_formula(is_isolated(state.theory, ptype, pool)))
print("strongly isolated:", is_strongly_isolated(state.theory, ptype, pool))

# %%
# step 1 refutes every Q_j at once; P then becomes strongly isolated
state = closure_step(state)
print([(str(c), k) for c, k in state.ledger], "consistent:", state.consistent)
print("strongly isolated by", format_formula(is_strongly_isolated(state.theory, ptype, pool)))

# %%
state = closure_step(state)
print("inconsistent at step", state.inconsistent_at, "rank", state.rank)
