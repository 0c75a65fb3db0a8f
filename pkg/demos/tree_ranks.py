# %% [markdown]
# Tree theories: every node of a finite tree enters the ledger one step
# after its rank, and the closure stops at the rank of the root.

# %%
from omitting.closure import iterate
from omitting.families import t_tree, tree_pool, type_p
from omitting.ordinals import parse_ordinal
from omitting.trees import (
    OrdinalTree, finite_rank, format_path, random_tree, rank_at, truncate,
)

# %%
# canonical trees for ordinals, cut to a finite window
tau = OrdinalTree(parse_ordinal("w"))
window = truncate(tau, width=3, depth=3)
print(" ".join(format_path(s) for s in window.sorted_paths()))
for text in ["3", "w", "w + 1", "w^2"]:
    print(text, "root rank", rank_at(OrdinalTree(parse_ordinal(text)), ()))

# %%
tree = random_tree(7, 12)
state = iterate(t_tree(tree), type_p(), tree_pool(tree))
print("nodes  ", len(tree), " root rank", finite_rank(tree, ()), " closure rank", state.rank)
for c, step in sorted(state.ledger, key=lambda e: e[1]):
    s = c.pred.index
    print(f"{format_path(s):12} rank {finite_rank(tree, s)}  refuted at step {step}")

# %%
# the same over a batch of seeds
agree = 0
for seed in range(30):
    tree = random_tree(seed, 10)
    agree += iterate(t_tree(tree), type_p(), tree_pool(tree)).rank == finite_rank(tree, ())
print(agree, "of 30 trees agree")
