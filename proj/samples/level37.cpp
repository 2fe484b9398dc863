// Builds SI(37, 2) from Velu's formulas and prints the vertices, the adjacency
// matrix and the 2-isogenies leaving j = 8.
#include <ssig/ssig.hpp>

#include <iostream>

int main()
{
    using namespace ssig;
    const auto g = sig::build_sig(37, 2);
    for (const auto &v : g.vertices)
        std::cout << "j" << v.index << " = " << v.j << "\n";
    for (const auto &row : g.adjacency) {
        for (i64 a : row)
            std::cout << ' ' << a;
        std::cout << "\n";
    }

    auto f1 = ff::make_field(37, 1);
    const ec::Curve e0(ff::Element(f1, 12), ff::Element(f1, 13));
    const ec::Curve e0k = e0.base_change(ff::embedding(f1, ff::make_field(37, 2)));
    for (const auto &k : ec::order_ell_subgroups(e0, 2)) {
        const ec::Curve t = ec::velu_codomain(e0k, k);
        std::cout << "kernel " << k.kernel_poly << "  ->  " << t.to_string() << "  j = " << ec::j_invariant(t) << "\n";
    }
}
