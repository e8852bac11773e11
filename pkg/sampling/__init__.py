# sampling: attribute single-sampling plans
# dist:      OC kernels (binomial, Poisson, hypergeometric, gamma-extended)
# criteria:  two-point admissibility, discrete lot variant, lot-size bound
# optimize:  sample-size minimisation, lot intervals, risks and quality roots
# scheme:    simplified lot-size scheme, ISO reference plans, recommender
# oracle:    exact rational, high-precision and Monte Carlo cross-checks
# report:    CLI output records
# errors:    exception hierarchy
