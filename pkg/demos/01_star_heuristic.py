# Greedy star collapsing on a small Steiner tree instance.
# Run: python3 demos/01_star_heuristic.py
# %%
from gst12 import Instance, solution_cost, solve_stp, steiner_forest_opt
from gst12.oracle import skeleton_cost

# Two hubs (6 and 7) each see three terminals; terminals 0..5 have no edges between them.
edges = [(0, 6), (1, 6), (2, 6), (3, 7), (4, 7), (5, 7), (6, 7)]
inst = Instance.build(8, edges, [range(6)])

# %%
f, trace = solve_stp(inst)
for m in trace.moves:
    print(f"{m.kind.value:13s} cost {m.cost}  pairs {list(m.pairs)}")
print("heuristic cost:", solution_cost(inst.graph, f))

# %%
opt = steiner_forest_opt(inst)
skel = skeleton_cost(inst.graph, opt.pairs)
print("optimum:", opt.cost, "with", skel, "unit edges")
print("3*ALG <= 3*OPT + skel:", 3 * trace.final_cost, "<=", 3 * opt.cost + skel)
