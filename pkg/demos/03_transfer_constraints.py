"""The defining constraints of ideal oblivious transfer have no solution.

Encode the task's requirements as residuals over candidate realizations
(pure tripartite states plus the receiver's three-outcome measurement) and
look for a feasible point. With every constraint active the multi-restart
search bottoms out well away from zero; drop a single well-chosen family
and exact solutions appear, which makes the infeasibility diagnosis sharp:

* drop the receiver-information bound -> the honest discrimination protocol
  is an exact solution (it leaks to a dishonest receiver);
* drop the sender-blindness requirement -> a purified mixed-marginal
  candidate is an exact solution, but it needs a 3-dimensional receiver
  space (at d_B = 2 unambiguity forces pure signal marginals, which pins
  the receiver's distinguishability at sqrt(3)/2 instead of 1/2).
"""

from qtwoparty import consistency as cons

print("residuals of the honest discrimination protocol embedded at dims (2,2,2):")
usd = cons.usd_witness()
rep = cons.residual(usd)
for family, value in rep.components.items():
    print(f"  {family:12s} {value:.3e}")
print(f"  total        {rep.total:.3e}")
print("only the receiver-information family resists; everything else is exact.")

print("\nsame candidate scored without the receiver-information constraint:")
print(f"  total = {cons.residual(usd, cons.drop('bob_info')).total:.3e}")

print("\nthe sender-blindness trade-off, dims (2,3,2):")
steer = cons.steerable_witness()
rep = cons.residual(steer)
for family, value in rep.components.items():
    print(f"  {family:12s} {value:.3e}")
print("exact on everything except sender-blindness: purifying the mixed")
print("signals is precisely what lets the sender read off the outcome.")

print("\nderivative-free search with all constraints, dims (2,2,2), 20 restarts:")
report = cons.search((2, 2, 2), restarts=20, max_iters=40, seed=0)
print(f"  best total residual: {report.best_total_residual:.6f}")
print("  breakdown:", {k: round(v, 6) for k, v in report.best_report.components.items()})
print(f"  ({report.evaluations} objective evaluations)")

print("\nscalar labs, dims (1,1,1): the information constraint alone costs 1/2:")
report = cons.search((1, 1, 1), restarts=5, max_iters=30, seed=0)
print(f"  best total residual: {report.best_total_residual:.6f}")
