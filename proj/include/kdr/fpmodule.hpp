#pragma once

// Finitely presented modules over a polynomial ring: ambient free rank plus
// a relation matrix whose columns span the relation submodule. Generators
// carry weight 0; truncated dimensions count standard monomials under the
// total-degree filtration, which is the comparison key used throughout.

#include <string>
#include <vector>

#include "groebner.hpp"

namespace kdr {

struct FPModule {
    RingPtr ring;
    int rank = 0;
    std::vector<ModVec> relations;
    std::vector<std::string> gen_labels;
};

// Presents span(kernel_gens)/span(image_gens) with the kernel generators as
// module generators. Relations are the syzygies among the kernel generators
// together with lifts of the image generators. Throws if some image
// generator is not in the span of the kernel generators.
inline FPModule quotient_presentation(const std::vector<ModVec>& kernel_gens,
                                      const std::vector<ModVec>& image_gens,
                                      int ambient_rank, const RingPtr& ring) {
    FPModule m;
    m.ring = ring;
    m.rank = static_cast<int>(kernel_gens.size());
    std::vector<ModVec> syz = module_kernel(kernel_gens, ambient_rank, ring);
    m.relations = std::move(syz);
    if (!image_gens.empty()) {
        SubmoduleOracle oracle(kernel_gens, ambient_rank, ring);
        for (const ModVec& g : image_gens) {
            auto c = oracle.lift(g);
            if (!c) throw std::runtime_error("quotient_presentation: image not contained in kernel");
            ModVec rel;
            for (size_t j = 0; j < c->size(); ++j) rel.set(static_cast<int>(j), (*c)[j]);
            if (!rel.is_zero()) m.relations.push_back(std::move(rel));
        }
    }
    return m;
}

// Cumulative Hilbert function: entry k is dim_Q of the degree-<=k filtered
// piece, for k = 0..d.
inline std::vector<long long> truncated_dimension(const FPModule& m, int d) {
    std::vector<long long> out;
    if (m.rank == 0) {
        out.assign(d + 1, 0);
        return out;
    }
    ModuleGB gb(m.ring, ModOrder::degtop());
    gb.build(m.relations);
    auto stairs = staircase(gb);
    int nv = static_cast<int>(m.ring->nvars());
    for (int k = 0; k <= d; ++k) {
        long long total = 0;
        for (int pos = 0; pos < m.rank; ++pos) {
            auto it = stairs.find(pos);
            static const std::vector<ExpVec> none;
            const std::vector<ExpVec>& lts = (it == stairs.end()) ? none : it->second;
            total += count_standard_monomials(lts, nv, k);
        }
        out.push_back(total);
    }
    return out;
}

inline std::vector<long long> exact_degree_dims(const std::vector<long long>& cumulative) {
    std::vector<long long> out;
    for (size_t i = 0; i < cumulative.size(); ++i)
        out.push_back(i == 0 ? cumulative[0] : cumulative[i] - cumulative[i - 1]);
    return out;
}

// Exact zero test: the module is zero iff every ambient generator lies in
// the relation submodule.
inline bool is_zero_module(const FPModule& m) {
    if (m.rank == 0) return true;
    SubmoduleOracle oracle(m.relations, m.rank, m.ring);
    for (int i = 0; i < m.rank; ++i) {
        ModVec e;
        e.set(i, Polynomial::constant(m.ring, Rational(1)));
        if (!oracle.contains(e)) return false;
    }
    return true;
}

} // namespace kdr
