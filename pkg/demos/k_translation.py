# %% [markdown]
# Translating second-order arithmetic into first-order arithmetic with a
# standardness predicate K and coded sets.

# %%
from omitting.ktranslate import absorb_guards, desugar, format_k, format_so, k_translate, parse_so

for text in ["EX X. E n. n in X",
             "AX X. EX Y. X = Y",
             "A n. (n + 1) * n = 0 | !(n = 1)"]:
    theta = parse_so(text)
    k = k_translate(theta)
    print(format_so(theta))
    print("  desugared", format_so(desugar(theta)))
    print("  K        ", format_k(k))
    print("  absorbed ", format_k(absorb_guards(k)))
