#include "torusmin/json_io.hpp"

namespace torusmin {

json to_json(const RunConfig& c) {
    return json{{"precision_bits", c.precision_bits},
                {"truncation", c.truncation},
                {"liouville_terms", c.liouville_terms},
                {"grid", c.grid},
                {"tol", c.tol},
                {"threads", c.threads},
                {"seed", c.seed},
                {"version", kToolVersion}};
}

json rat_to_json(const Rat& r) {
    if (den(r) == 1 && num(r) >= std::numeric_limits<long long>::min() &&
        num(r) <= std::numeric_limits<long long>::max())
        return num(r).convert_to<long long>();
    return rat_str(r);
}

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw std::invalid_argument("rational must be an integer or a \"p/q\" string");
}

json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int jx = 0; jx < m.cols(); ++jx) row.push_back(rat_to_json(Rat(m(i, jx))));
        rows.push_back(std::move(row));
    }
    return json{{"n", m.rows()}, {"rows", std::move(rows)}};
}

IntMatrix matrix_from_json(const json& j) {
    if (!j.contains("rows") || !j["rows"].is_array())
        throw std::invalid_argument("matrix: missing \"rows\" array");
    const json& rows = j["rows"];
    int n = static_cast<int>(rows.size());
    if (n == 0) throw std::invalid_argument("matrix: empty");
    int cols = static_cast<int>(rows[0].size());
    if (j.contains("n") && j["n"].get<int>() != n)
        throw std::invalid_argument("matrix: \"n\" does not match the row count");
    IntMatrix m(n, cols);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != cols)
            throw std::invalid_argument("matrix: ragged rows");
        for (int c = 0; c < cols; ++c) {
            Rat v = rat_from_json(rows[i][c]);
            if (den(v) != 1) throw std::invalid_argument("matrix: non-integer entry");
            m(i, c) = num(v);
        }
    }
    return m;
}

json poly_to_json(const RatPoly& p) {
    json coeffs = json::array();
    for (const Rat& c : p.coeffs()) coeffs.push_back(rat_to_json(c));
    return json{{"coeffs", std::move(coeffs)}};
}

RatPoly poly_from_json(const json& j) {
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
        throw std::invalid_argument("polynomial: missing \"coeffs\" array");
    std::vector<Rat> c;
    for (const auto& v : j["coeffs"]) c.push_back(rat_from_json(v));
    return RatPoly(std::move(c));
}

namespace {

json census_to_json(const RootCensus& c) {
    return json{{"roots_of_unity", c.n_roots_of_unity},
                {"unimodular_not_rou", c.n_unimodular_not_rou},
                {"off_circle", c.n_off_circle},
                {"undecided", c.n_undecided}};
}

json cnum_to_json(const CNum& z) {
    return json{{"re", z.re.convert_to<double>()}, {"im", z.im.convert_to<double>()}};
}

}  // namespace

json report_spectral(const SpectralReport& r) {
    json out{{"char_poly", poly_to_json(r.char_p)},
             {"min_poly", poly_to_json(r.min_p)},
             {"quasi_unipotent", r.quasi_unipotent},
             {"census", census_to_json(r.census)},
             {"has_eigenvalue_one", r.has_eigenvalue_one},
             {"spectrally_obstructed", r.spectrally_obstructed},
             {"verdict", to_string(r.verdict)}};
    if (r.qu_order) out["qu_order"] = r.qu_order->convert_to<long long>();
    if (r.spectral_certificate) {
        out["spectral_certificate"] = json{{"q", poly_to_json(r.spectral_certificate->q)},
                                        {"r", poly_to_json(r.spectral_certificate->r)},
                                        {"r_census", census_to_json(r.spectral_certificate->r_census)}};
    }
    return out;
}

json report_blockform(const BlockForm& bf) {
    return json{{"u", matrix_to_json(bf.u)},
                {"p", bf.p},
                {"a", matrix_to_json(bf.a)},
                {"b", matrix_to_json(bf.b)},
                {"c", matrix_to_json(bf.c)}};
}

json report_certificate(const ApproxCertificate& c) {
    return json{{"target_index", c.s},
                {"level", c.j},
                {"k", c.k.str()},
                {"distance_lo", rat_str(c.distance_lo)},
                {"distance_hi", rat_str(c.distance_hi)},
                {"bound", rat_str(c.bound)},
                {"holds", c.holds}};
}

json report_system(const SkewProductSystem& sys) {
    json delta = json::array();
    for (const auto& e : sys.delta)
        delta.push_back(json{{"value", rat_str(e.value)}, {"tail_bound", rat_str(e.tail_bound)}});
    json probes = json::array();
    for (const auto& pr : sys.plan.probes) {
        const char* family = nullptr;
        switch (pr.family) {
            case WitnessFamily::ScalarShift: family = "scalar-shift"; break;
            case WitnessFamily::Resolvent: family = "resolvent"; break;
            case WitnessFamily::FiberIntegrated: family = "fiber-integrated"; break;
            case WitnessFamily::NonPeriodicFiber: family = "non-periodic-fiber"; break;
        }
        probes.push_back(json{{"family", family},
                              {"target_index", pr.target_index},
                              {"description", pr.description}});
    }
    json out{{"n", sys.n},
             {"p", sys.p},
             {"a", matrix_to_json(sys.a)},
             {"b", matrix_to_json(sys.b)},
             {"c", matrix_to_json(sys.c)},
             {"delta", std::move(delta)},
             {"case", to_string(sys.case_tag)},
             {"m_power", sys.m_power},
             {"fiber_terms", sys.fiber_series.terms.size()},
             {"base_terms", sys.base_series ? sys.base_series->terms.size() : 0},
             {"witness_plan", std::move(probes)},
             {"precision_bits", sys.prec_bits}};
    if (sys.datum) {
        json targets = json::array();
        for (const Rat& t : sys.datum->targets) targets.push_back(rat_str(t));
        out["liouville"] = json{{"q", sys.datum->q.str()},
                                {"terms", sys.datum->terms},
                                {"targets", std::move(targets)}};
    }
    if (sys.nested) out["nested"] = report_system(*sys.nested);
    return out;
}

json report_witness(const ObstructionWitness& w) {
    json lg = json::array();
    for (const Int& v : w.l_gamma) lg.push_back(v.convert_to<long long>());
    json probes = json::array();
    for (const auto& p : w.probes)
        probes.push_back(json{{"target_index", p.target_index},
                              {"level", p.level},
                              {"k", p.k.str()},
                              {"value", cnum_to_json(p.value)},
                              {"divisor_floor", rat_str(p.divisor_floor)},
                              {"note", p.note}});
    return json{{"l_gamma", std::move(lg)},
                {"probes", std::move(probes)},
                {"liminf_estimate", w.liminf_estimate.convert_to<double>()},
                {"lower_bound", rat_str(w.lower_bound)},
                {"linear_mismatch", w.linear_mismatch},
                {"verdict", to_string(w.verdict)},
                {"rationale", w.rationale}};
}

json report_conjugacy(const SmoothConjugacy& c) {
    json terms = json::array();
    for (const auto& t : c.g.terms) {
        json freq = json::array();
        for (const Int& k : t.freq) freq.push_back(k.convert_to<long long>());
        json coeff = json::array();
        for (const auto& z : t.coeff) coeff.push_back(cnum_to_json(z));
        terms.push_back(json{{"freq", std::move(freq)}, {"coeff", std::move(coeff)}});
    }
    json beta1 = json::array();
    for (const Real& b : c.beta1) beta1.push_back(b.convert_to<double>());
    json scan{{"min_quality", c.scan.min_quality},
              {"minimizer", c.scan.minimizer.convert_to<long long>()}};
    if (c.scan.violator) scan["violator"] = c.scan.violator->convert_to<long long>();
    return json{{"g_terms", std::move(terms)},
                {"beta1", std::move(beta1)},
                {"residual", c.residual.convert_to<double>()},
                {"scan", std::move(scan)},
                {"grid", c.grid}};
}

json report_diagnostics(const OrbitDiagnostics& d) {
    json weyl = json::array();
    for (const auto& [k, v] : d.weyl) {
        json kk = json::array();
        for (long c : k) kk.push_back(c);
        weyl.push_back(json{{"k", std::move(kk)}, {"magnitude", v}});
    }
    return json{{"N", d.n},
                {"weyl", std::move(weyl)},
                {"coverage", d.coverage},
                {"precision_used", d.precision_used}};
}

}  // namespace torusmin
