# Copyright 2025 Jozsef Szalma

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import os
import csv
import logging
from dotenv import load_dotenv

from shifted_prime_lab import SieveConfig, Exponent, RhoSolver, scan_tc, singular_series
from shifted_prime_lab.analytic_bounds import assemble_bound_report
from shifted_prime_lab.config import BOUND_REPORT_HEADER
from shifted_prime_lab.cli import format_value
from shifted_prime_lab.shifted_stats import exponent_grid

# Set up logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

# -------------------------------------------------------------------
# 1) Settings from the environment (SPL_CACHE_DIR, SPL_WORKERS, ...)
# -------------------------------------------------------------------
load_dotenv()

config = SieveConfig.from_env()
x_values = [10 ** k for k in range(5, int(os.getenv("SPL_MAX_DECADE", "8")) + 1)]
out_path = os.getenv("SPL_REPORT_PATH", "desk_scale_report.csv")

# -------------------------------------------------------------------
# 2) Exponents: the conditional range plus the informative end of the bound
# -------------------------------------------------------------------
grid = exponent_grid("0.6", "0.9", "0.1") + [Exponent(89, 100), Exponent(23, 25), Exponent(19, 20)]

# -------------------------------------------------------------------
# 3) Constants shared by every row
# -------------------------------------------------------------------
ss = singular_series(10 ** 7, config=config)
solver = RhoSolver()
logger.info(f"Singular series {ss.value:.10f} (tail bound {ss.tail_bound:.2e})")


def main():
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BOUND_REPORT_HEADER)

        for x in x_values:
            scan = scan_tc(x, grid, config)
            for row in scan.rows:
                report = assemble_bound_report(row, x, ss, solver, with_sieve_rhs=True, config=config)
                data = report.as_dict()
                writer.writerow([format_value(data[key]) for key in BOUND_REPORT_HEADER])

                deviation = report.eh_deviation
                logger.info(
                    f"x={x} c={row.c}: ratio {report.empirical_ratio:.5f}, "
                    f"prediction {report.eh_prediction:.5f} (off by {deviation:.5f}), "
                    f"bound {report.theorem_bound:.5f}"
                )
                if report.informative and report.empirical_ratio > report.theorem_bound:
                    logger.warning(f"Bound exceeded at x={x}, c={row.c}")

    logger.info(f"Report written to {out_path}")


if __name__ == "__main__":
    main()
