// Regenerates tests/golden/*.json from the RK4 reference propagator.
//   make_golden <output-dir>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include "collmem/collmem.hpp"
#include "schrodinger_rk4.hpp"

namespace {

using collmem::json;
using collmem::oracle::Matrix;
using collmem::oracle::Segment;

json rows_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

Matrix cycle(const Matrix& hg, const Matrix& hh, double tau, int steps) {
    // e^{-iH_g tau} first, then e^{-iH_h tau}, then the sign-flipped pair.
    return collmem::oracle::propagate({{hg, tau}, {hh, tau}, {-hg, tau}, {-hh, tau}}, steps);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_golden <output-dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    const auto basis = collmem::build_basis(2);

    {
        const double s = 1.0 / std::sqrt(3.0);
        const double tau = 0.3;
        const auto [hg, hh] = collmem::build_hamiltonians(1.0, 1.0, s, basis);
        const Matrix u = cycle(hg.matrix(), hh.matrix(), tau, 400);
        json out{{"basis_cutoff", 2}, {"overlap", s}, {"tau", tau}, {"rows", rows_json(u)}};
        std::ofstream(dir + "/u_tau_s0577_tau0.3.json") << out.dump(1) << '\n';
    }
    {
        const double s = 0.5;
        const int n = 10;
        const auto p = collmem::SequenceParams::for_rotation(s, n);
        const auto [hg, hh] = collmem::build_hamiltonians(1.0, 1.0, s, basis);
        const Matrix u = cycle(hg.matrix(), hh.matrix(), p.tau, 400);
        Matrix un = Matrix::Identity(u.rows(), u.cols());
        for (int i = 0; i < n; ++i) un = u * un;

        // Ideal swap from the commutator generator [H_h,H_g] tau / (4i).
        const Matrix gen = (hh.matrix() * hg.matrix() - hg.matrix() * hh.matrix()) * (p.tau / std::complex<double>(0, 4));
        const Matrix ideal = collmem::oracle::propagate(gen, p.total, 4000);

        const collmem::SubspaceProjectors proj(basis);
        const auto& idx = proj.info_indices();
        Matrix m(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                std::complex<double> acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += std::conj(ideal(idx[k], idx[r])) * un(idx[k], idx[c]);
                m(r, c) = acc;
            }
        json out{{"overlap", s}, {"cycles", n}, {"tau", p.tau}, {"subspace", "S"}, {"rows", rows_json(m)}};
        std::ofstream(dir + "/m_s0.5_n10.json") << out.dump(1) << '\n';
    }
    return 0;
}
