// Reads a lattice TOML file and prints the twisted-module weight and the
// S-transformation check for the twist it describes.
//
//   twist_report samples/e8_neg_identity.toml

#include <cstdio>

#include <orbivert/orbivert.hpp>

int main(int argc, char** argv)
{
    namespace ov = orbivert;
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s lattice.toml\n", argv[0]);
        return 1;
    }
    try {
        const ov::io::LatticeDocument doc = ov::io::load_lattice_toml(argv[1]);
        const ov::IntegralLattice l = ov::IntegralLattice::validate(doc.gram, doc.name);
        const ov::TwistDatum tw =
            ov::TwistDatum::make(l, doc.automorphism.value_or(ov::IntMatrix::identity(l.rank())),
                                 doc.shift.value_or(ov::RationalVector(l.rank(), ov::Rational(0))));
        std::printf("lattice %s: rank %zu, det %s\n", l.name().c_str(), l.rank(), l.det().str().c_str());
        if (!l.unimodular())
            return 0;

        const ov::WeightReport w = ov::rho_lattice(tw);
        std::printf("order %u, rho %s, bottom dimension %s, %s\n", w.g_order, ov::to_string(w.rho).c_str(),
                    w.bottom_dimension.str().c_str(), std::string(ov::to_string(w.verdict)).c_str());

        const ov::SCheckResult s = ov::s_check(ov::z_id_g(tw), ov::z_g_id(tw));
        std::printf("lambda %.12f, max residual %.3e\n", s.lambda_est.real(), s.max_residual);
        return s.lambda_ok ? 0 : 2;
    } catch (const ov::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.is_numeric() ? 2 : 1;
    }
}
