// Prints a markdown table comparing the D2D queue delay formula with the
// discrete-event simulation and the exact M/G/1 (Pollaczek-Khinchine) mean.
#include <cstdio>
#include <vector>

#include "d2dcache/caching.hpp"
#include "d2dcache/delay.hpp"
#include "d2dcache/queue_sim.hpp"

using namespace d2dcache;

int main()
{
    std::printf("| spread | arrival mix | load | simulated | 95%% ci | formula | P-K exact | formula error |\n");
    std::printf("|---|---|---|---|---|---|---|---|\n");
    DesConfig des;
    des.horizon_requests = 1000000;
    std::uint64_t seed = 1;
    for (double spread : {1.0, 2.0, 4.0}) {
        for (double slow_share : {0.5, 0.2}) {
            if (spread == 1.0 && slow_share != 0.5) {
                continue;
            }
            for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const std::vector<double> mu = {1.0, spread};
                const double mean_s = slow_share / mu[0] + (1 - slow_share) / mu[1];
                const double total = rho / mean_s;
                const std::vector<double> lam = {slow_share * total, (1 - slow_share) * total};
                ArrivalSplit split;
                split.zeta_i = lam;
                split.zeta_d = total;
                const double formula = d2d_delay(split, mu);
                const double second = 2 * (slow_share / (mu[0] * mu[0]) + (1 - slow_share) / (mu[1] * mu[1]));
                const double pk = mean_s + total * second / (2 * (1 - rho));
                des.seed = seed++;
                const DesResult r = simulate_mpsq(lam, mu, des);
                std::printf("| %g | %g/%g | %g | %.4f | %.4f | %.4f | %.4f | %+.1f%% |\n", spread, slow_share,
                            1 - slow_share, rho, r.mean, r.ci95, formula, pk, 100 * (formula / r.mean - 1));
            }
        }
    }
    return 0;
}
