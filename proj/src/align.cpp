#include "shadowlab/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shadowlab/errors.hpp"

namespace shadowlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Band {
    std::vector<int> lo, hi;
    int width(int i) const {
        return hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] + 1;
    }
};

Band make_band(int n, int m, const AlignOptions& opt) {
    Band b;
    b.lo.resize(static_cast<std::size_t>(n));
    b.hi.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int lo = 0, hi = m - 1;
        if (opt.band) {
            auto [l, h] = opt.band(i);
            lo = std::max(lo, l);
            hi = std::min(hi, h);
        }
        if (lo > hi)
            throw PreconditionError("bottleneck_align: empty band row");
        b.lo[static_cast<std::size_t>(i)] = lo;
        b.hi[static_cast<std::size_t>(i)] = hi;
    }
    return b;
}

// Column of a macro step's straight segment at intermediate row offset s.
inline int chain_j(int s, int di, int dj) {
    return static_cast<int>(std::lround(static_cast<double>(s) * dj / di));
}

} // namespace

AlignResult bottleneck_align(int n, int m,
                             const std::function<double(int, int)>& cost,
                             const AlignOptions& opt) {
    AlignResult out;
    if (n <= 0 || m <= 0) return out;
    if (!opt.free_jump && opt.steps.empty()) return out;
    for (const auto& st : opt.steps)
        if (st.di < 1 || st.dj < 0)
            throw PreconditionError("bottleneck_align: steps must advance rows");
    const Band band = make_band(n, m, opt);

    std::vector<std::vector<int>> chain(opt.steps.size());
    for (std::size_t k = 0; k < opt.steps.size(); ++k)
        for (int s = 1; s < opt.steps[k].di; ++s)
            chain[k].push_back(chain_j(s, opt.steps[k].di, opt.steps[k].dj));

    // value[i][j-lo] = best bottleneck over matched cells from (i,j) to the
    // last row, including cost(i,j).
    std::vector<std::vector<double>> value(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        value[static_cast<std::size_t>(i)].assign(
            static_cast<std::size_t>(band.width(i)), kInf);
    // suffix minima per row, for the free-jump transitions
    std::vector<std::vector<double>> sufmin = value;

    auto val_at = [&](int i, int j) -> double {
        if (j < band.lo[static_cast<std::size_t>(i)] ||
            j > band.hi[static_cast<std::size_t>(i)])
            return kInf;
        return value[static_cast<std::size_t>(i)]
                    [static_cast<std::size_t>(j - band.lo[static_cast<std::size_t>(i)])];
    };
    auto suf_at = [&](int i, int j) -> double {
        const int lo = band.lo[static_cast<std::size_t>(i)];
        const int hi = band.hi[static_cast<std::size_t>(i)];
        const int jj = std::max(j, lo);
        if (jj > hi) return kInf;
        return sufmin[static_cast<std::size_t>(i)]
                     [static_cast<std::size_t>(jj - lo)];
    };

    // cost of one step from (i,j): the matched intermediate cells plus the
    // suffix value at the landing cell; false when it leaves the band.
    auto step_value = [&](int i, int j, std::size_t k, double& cand) -> bool {
        const AlignStep st = opt.steps[k];
        const int ni = i + st.di, nj = j + st.dj;
        if (ni > n - 1 || nj > m - 1) return false;
        cand = val_at(ni, nj);
        if (cand == kInf) return false;
        const auto& offs = chain[k];
        for (std::size_t s = 0; s < offs.size(); ++s) {
            const int cj = j + offs[s];
            const int ci = i + static_cast<int>(s) + 1;
            if (cj < band.lo[static_cast<std::size_t>(ci)] ||
                cj > band.hi[static_cast<std::size_t>(ci)])
                return false;
            cand = std::max(cand, cost(ci, cj));
        }
        return true;
    };

    for (int i = n - 1; i >= 0; --i) {
        const int lo = band.lo[static_cast<std::size_t>(i)];
        const int hi = band.hi[static_cast<std::size_t>(i)];
        for (int j = hi; j >= lo; --j) {
            const double c = cost(i, j);
            double best = kInf;
            if (i == n - 1) {
                if (!opt.fixed_endpoints || j == m - 1) best = c;
            } else if (opt.free_jump) {
                const double tail = suf_at(i + 1, j);
                if (tail != kInf) best = std::max(c, tail);
            } else {
                for (std::size_t k = 0; k < opt.steps.size(); ++k) {
                    double cand;
                    if (!step_value(i, j, k, cand)) continue;
                    best = std::min(best, std::max(c, cand));
                }
            }
            auto& vrow = value[static_cast<std::size_t>(i)];
            auto& srow = sufmin[static_cast<std::size_t>(i)];
            vrow[static_cast<std::size_t>(j - lo)] = best;
            const double right = j < hi ? srow[static_cast<std::size_t>(j - lo + 1)] : kInf;
            srow[static_cast<std::size_t>(j - lo)] = std::min(best, right);
        }
    }

    // Start cell: (0,0) when pinned, else the earliest column achieving the
    // optimum (tie order: cost, then start column, then move sequence).
    int j0 = 0;
    if (opt.fixed_endpoints) {
        if (val_at(0, 0) == kInf) return out;
    } else {
        double best = kInf;
        int arg = -1;
        for (int j = band.lo[0]; j <= band.hi[0]; ++j) {
            const double v = val_at(0, j);
            if (v < best) {
                best = v;
                arg = j;
            }
        }
        if (arg < 0 || best == kInf) return out;
        j0 = arg;
    }

    // Forward reconstruction against the achieved threshold. A bottleneck
    // optimum leaves slack below the threshold, so the lexicographically
    // smallest optimal move sequence takes, at every row, the earliest
    // move whose whole continuation stays within the threshold.
    out.feasible = true;
    out.cost = val_at(0, j0);
    const double threshold = out.cost;
    int i = 0, j = j0;
    for (int guard = 0; guard < n + 2; ++guard) {
        out.cells.emplace_back(i, j);
        if (i == n - 1) {
            if (opt.fixed_endpoints && j != m - 1) out.feasible = false;
            break;
        }
        if (opt.free_jump) {
            int pick = -1;
            const int nlo = std::max(j, band.lo[static_cast<std::size_t>(i + 1)]);
            const int nhi = band.hi[static_cast<std::size_t>(i + 1)];
            for (int nj = nlo; nj <= nhi; ++nj) {
                if (val_at(i + 1, nj) <= threshold) {
                    pick = nj;
                    break;
                }
            }
            if (pick < 0) {
                out.feasible = false;
                break;
            }
            out.moves.push_back(pick - j);
            i += 1;
            j = pick;
            continue;
        }
        int pick = -1;
        for (std::size_t k = 0; k < opt.steps.size(); ++k) {
            double cand;
            if (!step_value(i, j, k, cand)) continue;
            if (cand <= threshold) {
                pick = static_cast<int>(k);
                break;
            }
        }
        if (pick < 0) {
            out.feasible = false;
            break;
        }
        const AlignStep st = opt.steps[static_cast<std::size_t>(pick)];
        for (int s = 1; s < st.di; ++s)
            out.cells.emplace_back(i + s, j + chain_j(s, st.di, st.dj));
        out.moves.push_back(pick);
        i += st.di;
        j += st.dj;
    }
    return out;
}

AlignResult bottleneck_align_bruteforce(int n, int m,
                                        const std::function<double(int, int)>& cost,
                                        const AlignOptions& opt) {
    AlignResult best;
    if (n <= 0 || m <= 0) return best;
    const Band band = make_band(n, m, opt);

    std::vector<int> moves;
    std::vector<std::pair<int, int>> cells;

    std::function<void(int, int, double)> dfs = [&](int i, int j, double acc) {
        cells.emplace_back(i, j);
        const double here = std::max(acc, cost(i, j));
        if (i == n - 1) {
            if (!opt.fixed_endpoints || j == m - 1) {
                const bool better =
                    !best.feasible || here < best.cost ||
                    (here == best.cost && moves < best.moves);
                if (better) {
                    best.feasible = true;
                    best.cost = here;
                    best.moves = moves;
                    best.cells = cells;
                }
            }
            cells.pop_back();
            return;
        }
        if (opt.free_jump) {
            const int nlo = std::max(j, band.lo[static_cast<std::size_t>(i + 1)]);
            const int nhi = band.hi[static_cast<std::size_t>(i + 1)];
            for (int nj = nlo; nj <= nhi; ++nj) {
                moves.push_back(nj - j);
                dfs(i + 1, nj, here);
                moves.pop_back();
            }
            cells.pop_back();
            return;
        }
        for (std::size_t k = 0; k < opt.steps.size(); ++k) {
            const AlignStep st = opt.steps[k];
            const int ni = i + st.di, nj = j + st.dj;
            if (ni > n - 1 || nj > m - 1) continue;
            if (nj < band.lo[static_cast<std::size_t>(ni)] ||
                nj > band.hi[static_cast<std::size_t>(ni)])
                continue;
            double run = here;
            bool ok = true;
            std::size_t added = 0;
            for (int s = 1; s < st.di && ok; ++s) {
                const int cj = j + chain_j(s, st.di, st.dj);
                const int ci = i + s;
                if (cj < band.lo[static_cast<std::size_t>(ci)] ||
                    cj > band.hi[static_cast<std::size_t>(ci)]) {
                    ok = false;
                    break;
                }
                run = std::max(run, cost(ci, cj));
                cells.emplace_back(ci, cj);
                ++added;
            }
            if (ok) {
                moves.push_back(static_cast<int>(k));
                dfs(ni, nj, run);
                moves.pop_back();
            }
            for (std::size_t s = 0; s < added; ++s) cells.pop_back();
        }
        cells.pop_back();
    };

    if (opt.fixed_endpoints) {
        if (0 >= band.lo[0] && 0 <= band.hi[0]) dfs(0, 0, -kInf);
        return best;
    }
    // Free endpoints: earlier start columns win ties, then move order.
    AlignResult overall;
    for (int j = band.lo[0]; j <= band.hi[0]; ++j) {
        best = AlignResult{};
        dfs(0, j, -kInf);
        if (best.feasible && (!overall.feasible || best.cost < overall.cost))
            overall = best;
    }
    return overall;
}

} // namespace shadowlab
