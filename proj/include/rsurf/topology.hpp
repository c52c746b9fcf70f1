#ifndef RSURF_TOPOLOGY_HPP
#define RSURF_TOPOLOGY_HPP

#include "rsurf/tracker.hpp"

namespace rsurf {

/// Ramification data of the covering map z: X -> P^1.
struct RamificationProfile {
    struct Entry {
        bool at_infinity = false;
        cplx z;
        std::vector<std::pair<int, int>> partition; // cycle (length, count)
        int index_sum = 0;                          // sum of (length - 1)
    };
    std::vector<Entry> per_point;
    int V = 0;       // total ramification index
    int sheets = 0;
};

inline RamificationProfile ramification_profile(const MonodromyData& md) {
    RamificationProfile rp;
    rp.sheets = md.n;
    for (size_t j = 0; j < md.perms.size(); ++j) {
        RamificationProfile::Entry e;
        e.z = md.branch_points[j];
        e.partition = cycle_type(md.perms[j]);
        for (auto [len, cnt] : e.partition) e.index_sum += (len - 1) * cnt;
        rp.per_point.push_back(std::move(e));
    }
    RamificationProfile::Entry inf;
    inf.at_infinity = true;
    inf.partition = cycle_type(md.perm_infinity);
    for (auto [len, cnt] : inf.partition) inf.index_sum += (len - 1) * cnt;
    rp.per_point.push_back(std::move(inf));
    for (const auto& e : rp.per_point) rp.V += e.index_sum;
    return rp;
}

/// Riemann-Hurwitz genus for an m-sheeted cover of a genus-gY base.
/// Only the Riemann sphere target is reachable from the public interface.
namespace detail {
inline int genus_over(int m, int gY, int V) {
    if (V % 2 != 0) throw numeric_error("inconsistent ramification data: V is odd");
    int g2 = 2 * m * (gY - 1) + 2 + V; // = 2g
    if (g2 % 2 != 0 || g2 < 0)
        throw numeric_error("inconsistent ramification data");
    return g2 / 2;
}
} // namespace detail

inline int genus(const Curve& c, const MonodromyData& md) {
    RamificationProfile rp = ramification_profile(md);
    return detail::genus_over(rp.sheets, 0, rp.V);
}

inline int genus(const Curve& c) { return genus(c, monodromy(c)); }

/// True iff the group generated by the finite-loop permutations acts
/// transitively on the sheets, i.e. the surface is connected.
inline bool is_connected(const MonodromyData& md) {
    if (md.n <= 1) return true;
    std::vector<bool> seen(md.n, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (const auto& pi : md.perms) {
            for (int t : {pi[s], static_cast<int>(std::find(pi.begin(), pi.end(), s) - pi.begin())}) {
                if (!seen[t]) {
                    seen[t] = true;
                    ++count;
                    stack.push_back(t);
                }
            }
        }
    }
    return count == md.n;
}

/// floor((n-1)/2): genus of w^2 = p_n(z) with p squarefree of degree n.
inline int hyperelliptic_genus(int n) {
    if (n < 1) throw domain_error("hyperelliptic_genus: degree must be positive");
    return (n - 1) / 2;
}

} // namespace rsurf

#endif // RSURF_TOPOLOGY_HPP
