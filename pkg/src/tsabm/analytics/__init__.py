from .densities import (
    inverse_subordinator_pdf,
    laplace_inverse_subordinator,
    laplace_ys,
    moment_inverse_subordinator,
    nts_pdf,
    survival_inverse_subordinator,
    tempered_stable_pdf,
    ys_pdf,
)
from .mittag_leffler import log_mittag_leffler, mittag_leffler
from .moments import mean_of_s, mean_ys, msd_ys, renewal_density, second_moment_s
from .msd import POLY, POWER, MsdCurve, MsdFit, empirical_msd, fit_msd, loglog_slope
from .stable import StableDensity, stable_cdf, stable_density, stable_pdf
from .transforms import (
    LaplaceQuery,
    cov_nts,
    laplace_nts,
    laplace_nts_values,
    laplace_subordinator,
    mean_nts,
    msd_nts,
    msd_nts_coefficients,
    nts_domain_bound,
    survival_ts_asymptotic,
)

