// ord_5 of the spanning-tree counts along the constant Z_5-tower over
// X^{(37,11)}, next to the characteristic element and its lambda-invariant.
#include <ssig/ssig.hpp>

#include <iostream>

int main()
{
    using namespace ssig;
    const auto g = sig::build_sig(37, 11);
    const auto x = sig::build_dsig(g);
    const auto alpha = graph::constant_voltage(x, 1);

    for (const auto &l : iwasawa::ordp_complexity_sequence(x, alpha, 5, 3, 0))
        std::cout << "n = " << l.n << "  ord_5 kappa = " << l.ord << "\n";

    const auto delta = iwasawa::characteristic_element(x, alpha, 5, 8, 8);
    const auto ml = iwasawa::mu_lambda_of(delta);
    std::cout << "Delta = " << delta.to_string() << "\n";
    std::cout << "mu = " << ml.mu << ", lambda(Delta) = " << ml.lambda << ", lambda = " << ml.lambda - 1 << "\n";
}
