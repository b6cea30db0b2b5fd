#pragma once

#include <json.hpp>

#include "torusmin/blockform.hpp"
#include "torusmin/cohomology.hpp"
#include "torusmin/liouville.hpp"
#include "torusmin/orbitlab.hpp"
#include "torusmin/skew.hpp"
#include "torusmin/spectra.hpp"

namespace torusmin {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// Shared run parameters; embedded into every report so that identical
// config + seed reproduces byte-identical output.
struct RunConfig {
    unsigned precision_bits = 256;
    unsigned truncation = 3;       // J, retained approximation levels
    unsigned liouville_terms = 5;  // K; by default J + 2
    int grid = 1024;
    double tol = 1e-10;
    int threads = 1;
    unsigned seed = 1;
};

json to_json(const RunConfig& c);

json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);

json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const json& j);

json poly_to_json(const RatPoly& p);
RatPoly poly_from_json(const json& j);

json report_spectral(const SpectralReport& r);
json report_blockform(const BlockForm& bf);
json report_certificate(const ApproxCertificate& c);
json report_system(const SkewProductSystem& sys);
json report_witness(const ObstructionWitness& w);
json report_conjugacy(const SmoothConjugacy& c);
json report_diagnostics(const OrbitDiagnostics& d);

}  // namespace torusmin
