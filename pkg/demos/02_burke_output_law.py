"""The joint output law of the stable queue.

In equilibrium the output pair (departure process, back-of-queue marks)
has the law of the input pair (arrival process, service marks): departure
gaps match the arrival-gap law, dual marks match the mark law, and the two
are independent.  Both the geometric and the exponential model are run
with a burn-in standing in for stationarity.
"""

from dualq import RateParams, Seed, burke_experiment

for params in [RateParams("geomgeom1", 0.3, 0.6), RateParams("mm1", 0.3, 0.7)]:
    report = burke_experiment(params, horizon=50_000, burn_in=5_000, seed=Seed(1))
    print(f"\n{params.model}  arrival={params.arrival}  service={params.service}  "
          f"utilization={params.utilization:.2f}")
    for res in report.results:
        print(f"  {res.name:<26} stat={res.statistic:>9.4f}  "
              f"p={res.p_value:.4f}  {'pass' if res.passed else 'FAIL'}")
    print(f"  verdict: {'pass' if report.passed else 'FAIL'}  "
          f"(burn-in ok: {report.diagnostics['burn_in_ok']})")

# a deliberately short burn-in near saturation gets flagged
report = burke_experiment(RateParams("mm1", 0.69, 0.7), 2_000, 100, Seed(1))
print(f"\nnear-critical run with burn-in 100: {report.diagnostics['note']}")
