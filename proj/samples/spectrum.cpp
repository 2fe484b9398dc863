// Characteristic polynomials of A(SI(r, l)) for a few small r and l, with the
// Eisenstein, connectedness and Deligne checks.
#include <ssig/ssig.hpp>

#include <iostream>

int main()
{
    using namespace ssig;
    for (u64 r : {37, 61, 73})
        for (unsigned ell : {2u, 3u, 5u}) {
            const auto a = sig::build_sig(r, ell).adjacency;
            std::cout << "SI(" << r << ", " << ell << "): " << spectra::charpoly_adjacency(a).to_string()
                      << (spectra::eisenstein_check(a, ell) ? "  eisenstein" : "")
                      << (spectra::connectedness_via_spectrum(a, ell) ? "  connected" : "")
                      << (spectra::deligne_bound_check(a, ell) ? "  deligne" : "") << "\n";
        }
}
