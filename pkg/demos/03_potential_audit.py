# Following the potential ledger through one run of the star heuristic.
# Run: python3 demos/03_potential_audit.py
# %%
from gst12 import GenParams, audit_stp_run, gen_random, solve_stp, steiner_forest_opt

inst = gen_random(GenParams(10, 0.15, seed=21, star_bias=0.6, group_sizes=(6,)))
opt = steiner_forest_opt(inst)
_, trace = solve_stp(inst)
report = audit_stp_run(inst, opt, trace)

# %%
print(f"OPT {report.opt_cost}  skeleton {report.skeleton}  ALG {report.alg_cost}")
print("initial PromCost:", report.initial_prom_cost)
for r in report.rows:
    print(f"{r.kind:13s} dCA {str(r.d_ca):>4s}  dCR {str(r.d_cr):>4s}  dP {str(r.d_p):>5s}  "
          f"PromCost {r.prom_cost}")

# %%
for s in report.bridgeless_steps:
    print("normalization:", s.kind, "dCR", s.d_cr, "dPE", s.d_pe, "dPC", s.d_pc)
print("hard facts:", report.hard_facts)
print("monotone steps:", report.monotone_rate)
