// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Traces the weighted-sum boundary of a two-user 2x2 aligned channel and
// prints each point with its KKT and enhancement residuals.

#include <secrecy/secrecy.hpp>

#include <cstdio>

int main()
{
    using namespace secrecy;
    Matrix s(2, 2), s1(2, 2), s2(2, 2), sz(2, 2);
    s << 2.0, 0.3, 0.3, 1.0;
    s1 << 1.0, 0.2, 0.2, 0.5;
    s2 << 0.4, -0.1, -0.1, 1.5;
    sz << 1.5, 0.3, 0.3, 1.2;
    const AlignedChannel ch = make_aligned(s, {s1, s2}, sz);

    std::printf("%8s %8s %12s %12s %10s %10s\n", "mu_1", "mu_2", "R_1", "R_2", "kkt", "enhance");
    for (const BoundaryPoint &bp : sweep_boundary(ch, simplex_grid(2, 9)))
    {
        if (bp.partition.parts.empty())
        {
            std::printf("%8.3f %8.3f  failed: %s\n", bp.mu[0], bp.mu[1], bp.status.c_str());
            continue;
        }
        double enh = std::nan("");
        try
        {
            const EnhancedNoise en = enhance(ch, bp.partition, bp.certificate, bp.mu);
            enh = verify_enhancement(ch, bp.partition, bp.certificate, bp.mu, en).max_residual();
        }
        catch (const Error &)
        {
        }
        std::printf("%8.3f %8.3f %12.8f %12.8f %10.2e %10.2e\n", bp.mu[0], bp.mu[1], bp.rates.rates[0],
                    bp.rates.rates[1], bp.certificate.max_residual(), enh);
    }
    return 0;
}
