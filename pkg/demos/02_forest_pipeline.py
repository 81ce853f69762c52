# The 3/2 pipeline for several requirement sets, step by step.
# Run: python3 demos/02_forest_pipeline.py
# %%
from gst12 import GenParams, ResidualState, Trace, gen_random, solve_gst, steiner_forest_opt
from gst12.gst import annihilate_unsafe, ge_preprocess
from gst12.rayward_smith import run_main_loop

inst = gen_random(GenParams(10, 0.2, pairs=3, triples=1, seed=11, star_bias=0.5))
print("groups:", [sorted(g) for g in inst.requirements])
print("edges: ", sorted(inst.graph.edges))

# %%
# Preprocessing merges requirement sets joined by unit edges and tags them.
state = ResidualState(inst)
trace = Trace()
state, tagged = ge_preprocess(state, trace)
for rec in tagged:
    print(f"{rec.tag:6s} {sorted(rec.members)}  from {len(rec.origins)} set(s)")

# %%
# Unsafe sets give back their merges and pay 2 per original pair.
annihilate_unsafe(state, tagged, trace)
print("cost after annihilation:", state.cost(), " still open:", state.active)

# %%
trace.extend(run_main_loop(state, lambda a: a in set().union(*state.induced_requirements())))
print("pipeline cost:", state.cost())

# %%
f, full = solve_gst(inst)
opt = steiner_forest_opt(inst).cost
print("solve_gst:", full.final_cost, " optimum:", opt, " 2*ALG <= 3*OPT:", 2 * full.final_cost <= 3 * opt)
