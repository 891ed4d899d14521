// Walks through the singular Samuelson model for one parameter set: builds the
// descriptor system, prints its canonical form, and solves from T0 = T1 = 0.

#include <iomanip>
#include <iostream>

#include "singsys/samuelson.hpp"

int main() {
    using namespace singsys;
    namespace sm = singsys::samuelson;

    const sm::SamuelsonParams params(0.5, 1.0, sm::GovernmentExpenditure::constant(1.0));
    const auto system = sm::build_system(params);
    const auto wform = weierstrass_decompose(system.pencil());

    const Eigen::IOFormat fmt(6, 0, ", ", "\n", "  [", "]");
    std::cout << "F =\n" << system.pencil().F().format(fmt) << "\n";
    std::cout << "G =\n" << system.pencil().G().format(fmt) << "\n";
    std::cout << "Q =\n" << wform.Q.format(fmt) << "\n";
    std::cout << "P =\n" << wform.P.format(fmt) << "\n";
    std::cout << "J_p =\n" << wform.J.format(fmt) << "\n";
    std::cout << "H_q =\n" << wform.H.format(fmt) << "\n";
    std::cout << "p = " << wform.p << ", q = " << wform.q << ", q* = " << wform.q_star << "\n\n";

    const auto path = sm::pencil_trajectory(params, 0.0, 0.0, 30);
    std::cout << std::setw(4) << "k" << std::setw(14) << "T" << std::setw(14) << "C"
              << std::setw(14) << "I" << "\n";
    for (auto k = path.start_index; k <= path.end_index(); ++k) {
        const auto& s = path.at(k);
        std::cout << std::setw(4) << k << std::setw(14) << s.T << std::setw(14) << s.C
                  << std::setw(14) << s.I << "\n";
    }
    std::cout << "steady state G/(1-a) = " << 1.0 / (1.0 - params.a()) << "\n";
}
