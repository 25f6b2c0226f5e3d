#pragma once
// Suite runners and the JSON report. Requires the vendored json.hpp on the include path.
//
// Reports contain no timings and no output paths, so identical configurations
// produce identical bytes.

#include "deform.hpp"
#include "identities.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace nkspin {

using ojson = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n{"algebra", "curvature", "prop_suite", "weitzenboeck", "rarita", "deform"};
    return n;
}

struct Tolerances {
    std::map<std::string, double> v{
        {"algebra", 1e-9},      {"curvature", 1e-9},   {"prop_suite", 1e-8}, {"weitzenboeck", 1e-8},
        {"rarita", 1e-9},       {"rarita_angle", 1e-8}, {"rarita_gap", 1e6},  {"positivity", 1e-9},
        {"deform", 1e-8},       {"eigenvalue", 1e-6},
    };
    double operator[](const std::string& k) const { return v.at(k); }
    void set(const std::string& k, double x) {
        if (!v.count(k)) {
            std::string known;
            for (const auto& [name, _] : v) known += (known.empty() ? "" : ", ") + name;
            throw std::invalid_argument("unknown tolerance key '" + k + "' (known: " + known + ")");
        }
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::invalid_argument("tolerance '" + k + "' must be positive and finite");
        v[k] = x;
    }
};

struct RunConfig {
    std::string metric = "both";
    std::vector<std::string> suites = suite_names();
    std::optional<std::vector<Mode>> mode_window;
    Tolerances tol;
    std::uint64_t seed = 1;
    int instances = 100;
    bool parallel = false;

    std::vector<MetricKind> metrics() const {
        if (metric == "nearly_kahler") return {MetricKind::nearly_kahler};
        if (metric == "round_product") return {MetricKind::round_product};
        if (metric == "both") return {MetricKind::nearly_kahler, MetricKind::round_product};
        throw std::invalid_argument("unknown metric '" + metric + "' (nearly_kahler, round_product, both)");
    }
    void validate() const {
        (void)metrics();
        for (const auto& s : suites)
            if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
                throw std::invalid_argument("unknown suite '" + s +
                                            "' (algebra, curvature, prop_suite, weitzenboeck, rarita, deform)");
        if (instances <= 0) throw std::invalid_argument("instances must be positive");
        if (mode_window && mode_window->empty()) throw std::invalid_argument("mode window is empty");
    }
    // Suites in dependency order, without duplicates.
    std::vector<std::string> ordered_suites() const {
        std::vector<std::string> r;
        for (const auto& s : suite_names())
            if (std::find(suites.begin(), suites.end(), s) != suites.end()) r.push_back(s);
        return r;
    }
};

// Parses "1/2", "0.5", "1" into a non-negative half-integer.
inline double parse_half_integer(const std::string& s) {
    double x;
    auto slash = s.find('/');
    try {
        size_t used = 0;
        if (slash == std::string::npos) {
            x = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument("");
        } else {
            std::string a = s.substr(0, slash), b = s.substr(slash + 1);
            size_t ua = 0, ub = 0;
            double num = std::stod(a, &ua), den = std::stod(b, &ub);
            if (ua != a.size() || ub != b.size() || den == 0.0) throw std::invalid_argument("");
            x = num / den;
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (x < 0.0 || std::abs(2 * x - std::round(2 * x)) > 1e-12)
        throw std::invalid_argument("'" + s + "' is not a non-negative half-integer");
    return std::round(2 * x) / 2;
}

// "j1,j2" -> Mode.
inline Mode parse_mode(const std::string& s) {
    auto c = s.find(',');
    if (c == std::string::npos) throw std::invalid_argument("mode '" + s + "' must look like j1,j2");
    return {parse_half_integer(s.substr(0, c)), parse_half_integer(s.substr(c + 1))};
}

inline ojson mode_json(const Mode& m) { return ojson::array({m.j1, m.j2}); }

// ---------------------------------------------------------------------------
// Assertions.

struct Assertion {
    std::string id, space;
    double value = 0.0, expected = 0.0, tolerance = 0.0;
    std::string comparison;  // below | equal | at_least | not_below
    std::string provenance_tag;
    bool pass = false;
};

inline bool evaluate(const Assertion& a) {
    if (!std::isfinite(a.value)) return a.comparison == "at_least" && a.value > 0;
    if (a.comparison == "below") return a.value < a.tolerance;
    if (a.comparison == "equal") return std::abs(a.value - a.expected) <= a.tolerance;
    if (a.comparison == "at_least") return a.value >= a.expected;
    if (a.comparison == "not_below") return a.value >= a.expected - a.tolerance;
    throw std::logic_error("unknown comparison " + a.comparison);
}

inline Assertion make_assertion(std::string id, std::string space, double value, double expected, double tol,
                                std::string comparison, std::string provenance) {
    Assertion a{std::move(id), std::move(space), value, expected, tol, std::move(comparison), std::move(provenance)};
    a.pass = evaluate(a);
    return a;
}

inline ojson assertion_json(const Assertion& a) {
    ojson j;
    j["id"] = a.id;
    j["space"] = a.space;
    j["value"] = a.value;
    j["expected"] = a.expected;
    j["tolerance"] = a.tolerance;
    j["comparison"] = a.comparison;
    j["provenance_tag"] = a.provenance_tag;
    j["pass"] = a.pass;
    return j;
}

inline Assertion residual_assertion(const Residual& r) {
    return make_assertion(r.identity_id, r.space, r.max_residual, 0.0, r.tolerance, "below", r.provenance);
}

inline ojson residual_json(const Residual& r) {
    ojson j;
    j["identity_id"] = r.identity_id;
    j["space"] = r.space;
    j["dimension"] = r.dimension;
    j["max_residual"] = r.max_residual;
    j["pass"] = r.pass;
    j["value"] = r.max_residual;
    j["expected"] = 0.0;
    j["tolerance"] = r.tolerance;
    j["provenance_tag"] = r.provenance;
    if (!std::isnan(r.printed_form_residual)) j["printed_form_residual"] = r.printed_form_residual;
    return j;
}

struct SuiteResult {
    std::string name;
    ojson body = ojson::object();
    std::vector<Assertion> assertions;
    double seconds = 0.0;
    bool pass() const {
        for (const auto& a : assertions)
            if (!a.pass) return false;
        return true;
    }
};

// Collects assertions of one record and attaches them as its "assertions" array.
class RecordBuilder {
public:
    RecordBuilder(SuiteResult& out, ojson& rec) : out_(out), rec_(rec) {}
    const Assertion& add(Assertion a) {
        out_.assertions.push_back(a);
        local_.push_back(assertion_json(a));
        return out_.assertions.back();
    }
    void finish() { rec_["assertions"] = local_; }

private:
    SuiteResult& out_;
    ojson& rec_;
    ojson local_ = ojson::array();
};

inline std::vector<Mode> default_weitzenboeck_window() { return {{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}}; }
inline std::vector<Mode> default_prop_window() { return {{0, 0}, {0.5, 0.5}}; }

inline double einstein_constant(MetricKind k) { return k == MetricKind::nearly_kahler ? 5.0 : 2.0; }

// ---------------------------------------------------------------------------
// Geometry summary.

inline ojson geometry_summary(const FrameGeometry& g) {
    Mat6 ric = ricci(g.R);
    ojson j;
    j["metric"] = metric_name(g.kind);
    j["einstein_constant"] = ric.trace() / 6.0;
    j["scalar_curvature"] = scalar_curvature(g.R);
    j["ricci_scale"] = g.ricci_scale;
    j["phase_angle"] = g.phase_angle;
    if (g.nearly_kahler()) j["hermitian_einstein_constant"] = ricci(g.Rbar).trace() / 6.0;
    ojson frame = ojson::array();
    for (int a = 0; a < 6; ++a) {
        ojson row = ojson::array();
        for (int i = 0; i < 6; ++i) row.push_back(g.P(a, i));
        frame.push_back(row);
    }
    j["frame"] = frame;
    return j;
}

// ---------------------------------------------------------------------------
// Suites.

inline SuiteResult run_algebra(const RunConfig& cfg) {
    SuiteResult s{"algebra"};
    ojson rs = ojson::array();
    for (const auto& a : algebra_suite(cfg.seed, cfg.instances, cfg.tol["algebra"])) {
        ojson j = residual_json(a.residual);
        j["instances"] = a.instances;
        rs.push_back(j);
        s.assertions.push_back(residual_assertion(a.residual));
    }
    s.body["seed"] = cfg.seed;
    s.body["instances"] = cfg.instances;
    s.body["residuals"] = rs;
    return s;
}

inline ojson curvature_record(const FrameGeometry& g, double tol, SuiteResult& s) {
    const auto& md = model();
    const std::string sp = "pointwise";
    const double ec = einstein_constant(g.kind);
    auto t = [](const Mat6& B) { return fiber_action(Fiber::tangent, B); };
    auto sf = [](const Mat6& B) { return fiber_action(Fiber::spinor, B); };
    Mat6 ric = ricci(g.R);
    double scal = scalar_curvature(g.R);
    std::vector<Residual> rs;
    auto res = [&](const std::string& id, double r, const std::string& prov) {
        rs.push_back(make_residual(id, sp, 6, r, tol, prov));
    };
    ojson rec;
    rec["metric"] = metric_name(g.kind);
    RecordBuilder b(s, rec);
    res("ricci_einstein", max_abs(RMat(ric - ec * RMat::Identity(6, 6))), g.nearly_kahler() ? "reference" : "derived");
    b.add(make_assertion("scalar_curvature", sp, scal, 6.0 * ec, tol, "equal",
                         g.nearly_kahler() ? "reference" : "derived"));
    res("levi_civita_bianchi", levi_civita_bianchi_residual(g), "trivial");
    res("curvature_endomorphism_one_forms", max_abs(CMat(curvature_endomorphism(g.R, t) - ec * eye(6))),
        g.nearly_kahler() ? "reference" : "derived");
    res("spinor_curvature_endomorphism", max_abs(CMat(curvature_endomorphism(g.R, sf) - (scal / 8.0) * eye(8))),
        "derived");
    if (g.nearly_kahler()) {
        res("hermitian_ricci", max_abs(RMat(ricci(g.Rbar) - 4.0 * RMat::Identity(6, 6))), "reference");
        res("curvature_comparison", curvature_comparison_residual(g), "reference");
        res("hermitian_bianchi", hermitian_bianchi_residual(g), "reference");
        Tensor3 N = nabla_omega(g.conn);
        double nw = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                for (int k = 0; k < 6; ++k)
                    nw = std::max(nw, std::abs(N(i, j, k) - eval3(md.psi_plus, unit_vec(i), unit_vec(j), unit_vec(k))));
        res("nabla_omega_psi_plus", nw, "reference");
        double ar = 0.0;
        for (int i = 0; i < 6; ++i) ar = std::max(ar, max_abs(RMat(g.A[i] - a_frame()[i])));
        res("torsion_endomorphism_model", ar, "derived");
        res("hermitian_curvature_endomorphism_one_forms",
            max_abs(CMat(curvature_endomorphism(g.Rbar, t) - 4.0 * eye(6))), "reference");
        SpinorOp om = gamma_form(md.omega);
        res("hermitian_spinor_curvature_endomorphism",
            max_abs(CMat(curvature_endomorphism(g.Rbar, sf) - (4.5 * eye(8) + 0.5 * om * om))), "reference");
        res("spinor_ricci_contraction", spinor_ricci_residual(g), "reference");
        res("spinor_scalar_contraction", spinor_scalar_residual(g), "reference");
    }
    ojson arr = ojson::array();
    for (const auto& r : rs) {
        arr.push_back(residual_json(r));
        s.assertions.push_back(residual_assertion(r));
    }
    rec["einstein_constant"] = ec;
    rec["scalar_curvature"] = scal;
    rec["residuals"] = arr;
    b.finish();
    return rec;
}

inline SuiteResult run_curvature(const RunConfig& cfg) {
    SuiteResult s{"curvature"};
    ojson recs = ojson::array();
    for (MetricKind k : cfg.metrics()) recs.push_back(curvature_record(geometry(k), cfg.tol["curvature"], s));
    s.body["records"] = recs;
    return s;
}

inline ojson skipped(MetricKind k, const std::string& why) {
    ojson j;
    j["metric"] = metric_name(k);
    j["skipped"] = why;
    return j;
}

inline SuiteResult run_prop(const RunConfig& cfg) {
    SuiteResult s{"prop_suite"};
    ojson recs = ojson::array();
    for (MetricKind k : cfg.metrics()) {
        if (k != MetricKind::nearly_kahler) {
            recs.push_back(skipped(k, "identities of the Hermitian connection need the nearly Kahler structure"));
            continue;
        }
        ojson rec;
        rec["metric"] = metric_name(k);
        ojson arr = ojson::array();
        for (const Mode& m : cfg.mode_window.value_or(default_prop_window()))
            for (const auto& r : derivative_identity_suite(geometry(k), m, cfg.tol["prop_suite"])) {
                arr.push_back(residual_json(r));
                s.assertions.push_back(residual_assertion(r));
            }
        rec["residuals"] = arr;
        recs.push_back(rec);
    }
    s.body["records"] = recs;
    return s;
}

inline SuiteResult run_weitzenboeck(const RunConfig& cfg) {
    SuiteResult s{"weitzenboeck"};
    const double tol = cfg.tol["weitzenboeck"];
    ojson recs = ojson::array();
    for (MetricKind k : cfg.metrics()) {
        const FrameGeometry& g = geometry(k);
        ojson rec;
        rec["metric"] = metric_name(k);
        RecordBuilder b(s, rec);
        ojson arr = ojson::array(), blocks = ojson::array();
        for (const Mode& m : cfg.mode_window.value_or(default_weitzenboeck_window())) {
            if (g.nearly_kahler())
                for (const auto& r : weitzenboeck_suite(g, m, tol)) {
                    arr.push_back(residual_json(r));
                    s.assertions.push_back(residual_assertion(r));
                }
            SectionSpace ss = make_space(g, Fiber::spinor, m), st = make_space(g, Fiber::spinor_vector, m);
            DtmBlocks db = dtm_block_constants(ss, st);
            const std::string sp = m.label();
            ojson bj;
            bj["space"] = sp;
            bj["dirac_block"] = db.dirac_block.value;
            bj["adjoint_twistor_block"] = db.adjoint_twistor_block.value;
            bj["twistor_block"] = db.twistor_block.value;
            blocks.push_back(bj);
            auto blk = [&](const std::string& id, const BlockConstant& c, double expected) {
                b.add(make_assertion(id, sp, c.value, expected, tol, "equal", "reference"));
                b.add(make_assertion(id + "_proportionality", sp, c.residual, 0.0, tol, "below", "derived"));
            };
            blk("dtm_block_dirac", db.dirac_block, -2.0 / 3.0);
            blk("dtm_block_adjoint_twistor", db.adjoint_twistor_block, 2.0);
            blk("dtm_block_twistor", db.twistor_block, 1.0 / 3.0);
        }
        if (g.nearly_kahler()) rec["residuals"] = arr;
        rec["block_constants"] = blocks;
        b.finish();
        recs.push_back(rec);
    }
    s.body["records"] = recs;
    return s;
}

inline ojson rarita_record(const FrameGeometry& g, const Mode& m, const Tolerances& tol, SuiteResult& s) {
    const std::string sp = m.label();
    RaritaKernel rk = solve_rarita(g, m);
    ojson rec;
    rec["metric"] = metric_name(g.kind);
    rec["space"] = sp;
    rec["dim_kernel"] = rk.kernel.dim();
    rec["spectral_gap"] = rk.kernel.spectral_gap;
    RecordBuilder b(s, rec);
    ojson residuals = ojson::object();
    const int expected_dim = g.nearly_kahler() && m.invariant() ? 2 : 0;
    b.add(make_assertion("rarita_kernel_dimension", sp, rk.kernel.dim(), expected_dim, 0.0, "equal",
                         expected_dim ? "reference" : "derived"));
    b.add(make_assertion("rarita_twistor_consistency", sp, rk.kernel_with_twistor.dim(), rk.kernel.dim(), 0.0, "equal",
                         "derived"));
    if (g.nearly_kahler()) {
        SectionSpace fs = make_space(g, Fiber::forms, m);
        HarmonicForms h = harmonic_forms(fs, 3);
        rec["dim_harmonic_3forms"] = h.basis.cols();
        b.add(make_assertion("rarita_harmonic_dimension", sp, rk.kernel.dim(), double(h.basis.cols()), 0.0, "equal",
                             "reference"));
        if (m.invariant()) {
            b.add(make_assertion("rarita_spectral_gap", sp, rk.kernel.spectral_gap, tol["rarita_gap"], 0.0,
                                 "at_least", "reference"));
            std::map<std::string, double> worst;
            std::vector<std::string> order;
            for (Eigen::Index a = 0; a < rk.basis.cols(); ++a)
                for (const auto& r : reduction_system_check(g, rk.basis.col(a), tol["rarita"]).residuals) {
                    if (!worst.count(r.identity_id)) order.push_back(r.identity_id);
                    worst[r.identity_id] = std::max(worst[r.identity_id], r.max_residual);
                }
            for (const auto& id : order) {
                residuals[id] = worst[id];
                b.add(make_assertion(id, sp, worst[id], 0.0, tol["rarita"], "below",
                                     id == "s32_vector_condition" ? "derived" : "reference"));
            }
            InvariantHarmonic3 ih = invariant_harmonic_3forms(g);
            CMat T(rk.basis.rows(), 2);
            for (int a = 0; a < 2; ++a) T.col(a) = rs_from_harmonic_3form(g, ih.projected_volumes[a]).section;
            double angle = std::numeric_limits<double>::quiet_NaN();
            CMat span = orthonormal_span(T);
            if (span.cols() == rk.basis.cols() && span.cols() > 0) {
                auto ang = subspace_angles(span, rk.basis);
                angle = *std::max_element(ang.begin(), ang.end());
            }
            residuals["harmonic_round_trip_angle"] = angle;
            b.add(make_assertion("harmonic_round_trip_angle", sp, angle, 0.0, tol["rarita_angle"], "below",
                                 "reference"));
        }
    } else {
        PositivityReport p = round_metric_positivity_check(g, m);
        residuals["positivity_min_eigenvalue"] = p.min_eigenvalue;
        residuals["dirac_min_singular_value"] = p.min_singular_value;
        rec["dim_dirac_kernel"] = p.dim_kernel;
        b.add(make_assertion("round_positivity", sp, p.min_eigenvalue, 0.0, tol["positivity"], "not_below",
                             "reference"));
        b.add(make_assertion("round_dirac_kernel_dimension", sp, p.dim_kernel, 0.0, 0.0, "equal", "reference"));
    }
    rec["residuals"] = residuals;
    rec["basis_provenance"] = rk.basis_provenance;
    if (rk.ill_conditioned) rec["warning"] = "spectral gap below 10: kernel dimension is ill-conditioned";
    b.finish();
    return rec;
}

inline SuiteResult run_rarita(const RunConfig& cfg) {
    SuiteResult s{"rarita"};
    ojson recs = ojson::array();
    for (MetricKind k : cfg.metrics())
        for (const Mode& m : cfg.mode_window.value_or(default_mode_window()))
            recs.push_back(rarita_record(geometry(k), m, cfg.tol, s));
    s.body["records"] = recs;
    return s;
}

inline ojson deform_record(const FrameGeometry& g, const Mode& m, const RunConfig& cfg, SuiteResult& s) {
    const std::string sp = m.label();
    const double tol = cfg.tol["deform"];
    ojson rec;
    if (!g.nearly_kahler()) {
        KillingSpinorSpace kp = killing_spinor_space(g, m);
        rec["metric"] = metric_name(g.kind);
        rec["space"] = sp;
        rec["dim_Kplus"] = kp.dim();
        RecordBuilder b(s, rec);
        b.add(make_assertion("killing_spinor_dimension", sp, kp.dim(), 0.0, 0.0, "equal", "derived"));
        b.finish();
        return rec;
    }
    DeformationSpaceReport r = deformation_space_report(g, m, tol, cfg.tol["eigenvalue"], cfg.seed);
    rec["metric"] = metric_name(g.kind);
    rec["space"] = sp;
    rec["dim_E12"] = r.dim_E12;
    rec["dim_Kplus"] = r.dim_Kplus;
    rec["dim_deformations"] = r.dim_deformations;
    rec["pass"] = r.pass;
    rec["dim_beta"] = r.dim_beta;
    rec["coclosed_primitive11_dim"] = r.eigen.constrained_dim;
    rec["closest_eigenvalue"] = r.closest_eigenvalue;
    rec["e12_flagged"] = r.eigen.flagged;
    ojson residuals;
    residuals["chain"] = r.chain_residual;
    residuals["intertwining"] = r.intertwining_residual;
    residuals["differential_type"] = r.split_residual;
    residuals["laplacian_invariance"] = r.invariance_residual;
    residuals["killing_spinor_dirac"] = r.dirac_kplus_residual;
    residuals["converse_gap"] = r.converse_gap;
    rec["residuals"] = residuals;
    RecordBuilder b(s, rec);
    b.add(make_assertion("deformation_dimension_balance", sp, r.dim_deformations, double(r.dim_E12 + r.dim_Kplus),
                         0.0, "equal", "reference"));
    if (m.invariant())
        b.add(make_assertion("killing_spinor_dimension", sp, r.dim_Kplus, 1.0, 0.0, "equal", "reference"));
    b.add(make_assertion("killing_spinor_dirac", sp, r.dirac_kplus_residual, 0.0, tol, "below", "derived"));
    b.add(make_assertion("deformation_chain", sp, r.chain_residual, 0.0, tol, "below", "reference"));
    b.add(make_assertion("deformation_intertwining", sp, r.intertwining_residual, 0.0, tol, "below", "derived"));
    b.add(make_assertion("coclosed_differential_type", sp, r.split_residual, 0.0, tol, "below", "reference"));
    b.add(make_assertion("laplacian_invariance", sp, r.invariance_residual, 0.0, tol, "below", "trivial"));
    b.add(make_assertion("eigenvalue_match", sp, r.eigenvalue_mismatch, 0.0, cfg.tol["eigenvalue"], "below",
                         "reference"));
    b.add(make_assertion("eigenvalue_constraint_flags", sp, r.eigen.flagged, 0.0, 0.0, "equal", "derived"));
    b.finish();
    return rec;
}

inline SuiteResult run_deform(const RunConfig& cfg) {
    SuiteResult s{"deform"};
    ojson recs = ojson::array();
    for (MetricKind k : cfg.metrics())
        for (const Mode& m : cfg.mode_window.value_or(default_mode_window()))
            recs.push_back(deform_record(geometry(k), m, cfg, s));
    s.body["records"] = recs;
    return s;
}

inline SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r;
    if (name == "algebra") r = run_algebra(cfg);
    else if (name == "curvature") r = run_curvature(cfg);
    else if (name == "prop_suite") r = run_prop(cfg);
    else if (name == "weitzenboeck") r = run_weitzenboeck(cfg);
    else if (name == "rarita") r = run_rarita(cfg);
    else if (name == "deform") r = run_deform(cfg);
    else throw std::invalid_argument("unknown suite '" + name + "'");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------

struct RunReport {
    ojson json;
    std::vector<SuiteResult> suites;
    bool pass() const {
        for (const auto& s : suites)
            if (!s.pass()) return false;
        return true;
    }
};

inline ojson config_json(const RunConfig& cfg) {
    ojson c;
    c["metric"] = cfg.metric;
    c["suites"] = cfg.ordered_suites();
    if (cfg.mode_window) {
        ojson w = ojson::array();
        for (const auto& m : *cfg.mode_window) w.push_back(mode_json(m));
        c["mode_window"] = w;
    } else {
        c["mode_window"] = "default";
    }
    ojson t;
    for (const auto& [k, v] : cfg.tol.v) t[k] = v;
    c["tolerances"] = t;
    c["seed"] = cfg.seed;
    c["instances"] = cfg.instances;
    return c;
}

inline RunReport run(const RunConfig& cfg) {
    cfg.validate();
    RunReport rep;
    // Build shared caches before any concurrent work.
    for (MetricKind k : cfg.metrics()) (void)geometry(k);
    (void)bases();
    (void)kappa();
    const auto names = cfg.ordered_suites();
    if (cfg.parallel) {
        std::vector<std::future<SuiteResult>> fs;
        for (const auto& n : names) fs.push_back(std::async(std::launch::async, [&cfg, n] { return run_suite(n, cfg); }));
        for (auto& f : fs) rep.suites.push_back(f.get());
    } else {
        for (const auto& n : names) rep.suites.push_back(run_suite(n, cfg));
    }
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_json(cfg);
    ojson geo = ojson::array();
    for (MetricKind k : cfg.metrics()) geo.push_back(geometry_summary(geometry(k)));
    j["geometry"] = geo;
    ojson suites = ojson::object();
    int total = 0, failed = 0;
    ojson failures = ojson::array();
    for (const auto& s : rep.suites) {
        ojson body = s.body;
        body["pass"] = s.pass();
        suites[s.name] = body;
        for (const auto& a : s.assertions) {
            ++total;
            if (!a.pass) {
                ++failed;
                ojson f = assertion_json(a);
                f["suite"] = s.name;
                failures.push_back(f);
            }
        }
    }
    j["suites"] = suites;
    ojson summary;
    summary["assertions"] = total;
    summary["failed"] = failed;
    summary["failures"] = failures;
    summary["pass"] = failed == 0;
    j["summary"] = summary;
    rep.json = j;
    return rep;
}

inline std::string text_report(const RunReport& rep) {
    std::ostringstream o;
    for (const auto& s : rep.suites) {
        int failed = 0;
        for (const auto& a : s.assertions) failed += !a.pass;
        o << s.name << ": " << (s.pass() ? "PASS" : "FAIL") << " (" << s.assertions.size() << " assertions, "
          << failed << " failed)\n";
        for (const auto& a : s.assertions)
            if (!a.pass)
                o << "  FAIL " << a.id << " [" << a.space << "] value " << a.value << " expected " << a.expected
                  << " (" << a.comparison << ", tol " << a.tolerance << ")\n";
    }
    o << "overall: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// explain catalogue.

struct Explanation {
    std::string suite, statement, construction;
};

inline const std::map<std::string, Explanation>& explain_catalogue() {
    static const std::map<std::string, Explanation> c = [] {
        std::map<std::string, Explanation> m;
        auto add = [&](std::string id, std::string suite, std::string st, std::string con) {
            m[std::move(id)] = {std::move(suite), std::move(st), std::move(con)};
        };
        const std::string pw = "Evaluated on seeded Gaussian instances in the fixed SU(3) model "
                               "(omega = e12+e34+e56, psi+ + i psi- = (e1+ie2)(e3+ie4)(e5+ie6)); "
                               "residual is the largest relative deviation.";
        add("killing_vol_action", "algebra", "JX.kappa = -vol.X.kappa = X.vol.kappa",
            pw + " X random; the form with +vol.X.kappa is reported as printed_form_residual.");
        add("killing_psi_minus", "algebra", "psi-.kappa = -4 kappa for the invariant Killing spinor",
            pw + " kappa times a random phase; the +4 form is reported as printed_form_residual.");
        add("killing_two_form", "algebra",
            "eta.kappa = -3 lambda vol.kappa + 2 JY.kappa for eta = lambda omega + Y-|psi+ + eta0, eta0 primitive (1,1)",
            pw + " lambda, Y, eta0 random.");
        add("killing_vector_pair", "algebra", "X.Y.kappa = -g(X,Y) kappa - omega(X,Y) vol.kappa + (A_X Y).kappa",
            pw + " X, Y random.");
        add("a_of_a", "algebra", "A_{A_X Y} = X^Y - JX^JY and the closed form of A_Z A_X Y", pw);
        add("induced_action_formula", "algebra",
            "B_* u (v1..vp) = -sum_k u(v1,..,B vk,..,vp) for the derivation extension of B",
            pw + " B random 6x6, u a random p-form, p in 1..5, compared on all frame p-tuples.");
        add("a_on_psi_plus", "algebra", "(A_X)_* psi+ = -2 X^omega", pw);
        add("sym_plus_on_psi", "algebra", "h_* psi+- = -(tr h / 2) psi+- for h commuting with J", pw);
        add("sym_plus0_on_psi", "algebra", "h_* psi+- = 0 for trace-free h commuting with J", pw);
        add("primitive11_on_psi", "algebra", "w_* psi+- = 0 for w a primitive (1,1)-form", pw);
        add("sym_minus_hodge", "algebra", "*(S_* psi+) = -S_* psi- for S symmetric anticommuting with J", pw);
        add("hodge_primitive11_wedge", "algebra",
            "*g = -g^omega and *(e_i^g) = e_i-|*g = -(e_i-|g)^omega - Je_i^g for g primitive (1,1)",
            pw + " The +sign variant of the last step is reported as printed_form_residual.");
        add("schur_w_wedge", "algebra", "sum_i e_i ^ (A_{e_i})_* w = 0 for w primitive (1,1)", pw);
        add("schur_w_contract", "algebra", "sum_i e_i -| (A_{e_i})_* w = 0 for w primitive (1,1)", pw);
        add("schur_h", "algebra", "sum_i [A_{e_i}, h] e_i = 0 for h in Sym+_0", pw);
        add("schur_s", "algebra", "sum_i [A_{e_i}, S] e_i = 0 for S in Sym-", pw);
        add("schur_s_psi_minus", "algebra", "sum_i e_i -| (A_{e_i})_* (S_* psi-) = 0 for S in Sym-", pw);

        const std::string cv = "Computed from the frame connection of the left-invariant metric on SU(2)xSU(2) "
                               "(structure constants -> Koszul formula -> curvature tensor).";
        add("ricci_einstein", "curvature", "Ric = 5g (nearly Kahler), Ric = 2g (round product)", cv);
        add("scalar_curvature", "curvature", "scal = 30 (nearly Kahler), scal = 12 (round product)", cv);
        add("levi_civita_bianchi", "curvature", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", cv + " All frame triples.");
        add("curvature_endomorphism_one_forms", "curvature",
            "q(R) = Ric on 1-forms, i.e. 5 Id (nearly Kahler) or 2 Id (round product)",
            cv + " q(R) = 1/4 sum R_ijkl (e_ij)_* (e_kl)_* assembled on the tangent representation.");
        add("spinor_curvature_endomorphism", "curvature", "q(R) = scal/8 on spinors",
            cv + " q(R) assembled with the spin lift of so(6).");
        add("hermitian_ricci", "curvature", "Ric-bar = 4g for the canonical Hermitian connection",
            cv + " Hermitian connection nabla-bar = nabla - 1/2 A.");
        add("curvature_comparison", "curvature",
            "R-bar - R equals the universal tensor built from A (difference computed in the model)",
            cv + " Full 6^4 tensor compared.");
        add("hermitian_bianchi", "curvature", "cyclic sum of R-bar(X,Y)Z equals the torsion term built from A",
            cv + " All frame triples.");
        add("nabla_omega_psi_plus", "curvature", "nabla omega = psi+", cv);
        add("torsion_endomorphism_model", "curvature", "A_X = J(nabla_X J) equals the model A_X = J(X-|psi+)",
            cv + " Frame vectors X = e_i.");
        add("hermitian_curvature_endomorphism_one_forms", "curvature", "q(R-bar) = 4 Id on 1-forms", cv);
        add("hermitian_spinor_curvature_endomorphism", "curvature", "q(R-bar) = 9/2 + 1/2 omega.omega on spinors",
            cv + " 8x8 matrix identity.");
        add("spinor_ricci_contraction", "curvature",
            "sum_j e_j.R-bar(X,e_j) = -1/2 Ric-bar(X) - X + JX.omega on spinors", cv + " X = e_i.");
        add("spinor_scalar_contraction", "curvature", "sum_ij e_i.e_j.R-bar(e_i,e_j) = 18 + 2 omega.omega on spinors",
            cv);

        const std::string op = "Operator matrices on sections of mode (j1,j2): V (x) fiber with nabla_i = "
                               "dpi(e_i) (x) 1 + 1 (x) rho(conn_i); residual is the largest matrix entry of "
                               "LHS - RHS restricted to the named sub-bundle.";
        add("herm_primitive11", "prop_suite", "sum (A_{e_i})_* nabla-bar_{e_i} phi = -J(delta phi)-|psi+ on primitive (1,1)", op);
        add("herm_sigma", "prop_suite", "sum (A_{e_i})_* nabla-bar_{e_i} sigma = -2 (delta S)^omega for sigma = S_* psi+", op);
        add("herm_sym_plus", "prop_suite", "(sum (A_{e_i})_* nabla-bar_{e_i} h)_* psi+ = 2 (delta h)^omega - 4 d phi, phi = g(Jh.,.)", op);
        add("herm_sym_minus", "prop_suite", "sum (A_{e_i})_* nabla-bar_{e_i} S = ((delta S)-|psi+ + delta sigma) o J", op);
        add("twisted_primitive11", "prop_suite",
            "(sum A~_{e_i} nabla-bar_{e_i} w)_* psi+ = 2 delta w ^ omega - 4 * d w",
            op + " The +4 variant is reported as printed_form_residual.");
        add("twisted_sym_plus", "prop_suite", "sum A~_{e_i} nabla-bar_{e_i} h = -((delta h)-|psi-) as endomorphism", op);
        add("twisted_sym_minus", "prop_suite", "sum A~_{e_i} nabla-bar_{e_i} S = (* d sigma - (delta S)-|psi-) as endomorphism", op);
        add("dirac_hermitian_comparison", "weitzenboeck", "D-bar_TM = D_TM - 3/4 psi-. - 1/2 sum e_k.(A_{e_k})", op);
        add("hermitian_lichnerowicz", "weitzenboeck",
            "D-bar_TM^2 = nabla-bar^* nabla-bar + q(R-bar) + 1/2 + 1/2 omega.omega + sum (e_j-|psi-). nabla-bar_j", op);
        add("rough_laplacian_comparison", "weitzenboeck",
            "nabla-bar^* nabla-bar = nabla^* nabla + 5/8 + 1/8 omega.omega + sum A_{e_j} nabla_j + 1/2 torsion term", op);
        add("twisted_second", "weitzenboeck",
            "D-bar_TM^2 = D_TM^2 + 17/8 + 9/8 omega.omega + 3/2 torsion term + sum A_{e_j} nabla_j + curvature difference", op);
        add("lc_lichnerowicz", "weitzenboeck", "D_TM^2 = nabla^* nabla + scal/4 + 1/2 sum e_a e_b . R(e_a,e_b)", op);
        const std::string blk = op + " S_{1/2} embedded by zeta -> -(1/6) sum e_k.zeta (x) e_k with left inverse Pi; "
                                     "constant fitted by least squares against the reference operator.";
        add("dtm_block_dirac", "weitzenboeck", "S_{1/2} -> S_{1/2} block of D_TM = (2-n)/n D = -2/3 D", blk);
        add("dtm_block_adjoint_twistor", "weitzenboeck", "S_{3/2} -> S_{1/2} block of D_TM = 2 P^*", blk);
        add("dtm_block_twistor", "weitzenboeck", "S_{1/2} -> S_{3/2} block of D_TM = (2/n) P = 1/3 P", blk);
        add("dtm_block_dirac_proportionality", "weitzenboeck", "residual of the fit for dtm_block_dirac", blk);
        add("dtm_block_adjoint_twistor_proportionality", "weitzenboeck",
            "residual of the fit for dtm_block_adjoint_twistor", blk);
        add("dtm_block_twistor_proportionality", "weitzenboeck", "residual of the fit for dtm_block_twistor", blk);

        const std::string rs = "Kernel of the stacked matrix [D_TM; Pi] on sections of S_{1/2} (x) T by SVD; "
                               "singular values below 1e-8 sigma_max count as zero.";
        add("rarita_kernel_dimension", "rarita",
            "dim(ker D_TM cap ker Pi) = b3 contribution: 2 on invariant sections of nearly Kahler S3xS3, 0 "
            "on mode spaces and for the round product", rs);
        add("rarita_twistor_consistency", "rarita", "ker[D_TM; Pi] = ker[D_TM; Pi; P^*]",
            rs + " Second kernel adds the adjoint twistor operator.");
        add("rarita_harmonic_dimension", "rarita", "dim ker = dim of harmonic 3-forms in the same space",
            rs + " Harmonic 3-forms from the kernel of d delta + delta d on degree-3 sections.");
        add("rarita_spectral_gap", "rarita", "smallest nonzero / largest zero singular value > 1e6", rs);
        add("harmonic_round_trip_angle", "rarita",
            "the fields sum_i (S e_i).kappa (x) e_i with S_* psi+ the harmonic projections of the factor volume "
            "forms span the kernel",
            rs + " Largest principal angle between the two subspaces.");
        const std::string red = "Symbols (alpha0, alpha1, alpha6 per leg; w, h, S, phi, sigma) extracted from each "
                                "kernel vector in the orthonormal frame {kappa, e_k.kappa, vol.kappa}.";
        add("lemma_alpha0_vanishes", "rarita", "alpha0^(i) = 0 for a field in the kernel", red);
        add("lemma_alpha6_vanishes", "rarita", "alpha6^(i) = 0 for a field in the kernel", red);
        add("s32_trace_condition", "rarita", "sum_i g(e_i, alpha1^(i)) = 0 (membership in S_{3/2})", red);
        add("s32_omega_condition", "rarita", "sum_i omega(e_i, alpha1^(i)) = 0 (membership in S_{3/2})", red);
        add("s32_vector_condition", "rarita",
            "sum_i alpha0^(i) e_i + alpha6^(i) Je_i + A_{e_i} alpha1^(i) = 0 (membership in S_{3/2})", red);
        add("divergence_w_plus_h", "rarita", "delta w + delta h = 0", red);
        add("divergence_s", "rarita", "delta S = 0", red);
        add("system_b_star_d_sigma", "rarita", "* d sigma = -2 w", red);
        add("system_b_delta_sigma", "rarita", "delta sigma = -2 phi", red);
        add("system_b_star_dw", "rarita", "* d w = d phi", red);
        add("system_b_delta_w", "rarita", "delta w = 0", red);
        add("system_b_delta_phi", "rarita", "delta phi = 0", red);
        add("final_laplace_sigma", "rarita", "Delta sigma = 0", red);
        add("final_phi_vanishes", "rarita", "phi = 0", red);
        add("final_w_vanishes", "rarita", "w = 0", red);
        const std::string pos = "Round product metric: M = D_TM, N = (nabla_1; ...; nabla_6) stacked on sections "
                                "of S_{1/2} (x) T; Hermitian eigenvalues of M^*M - N^*N - Id.";
        add("round_positivity", "rarita", "|D_TM x|^2 >= |nabla x|^2 + |x|^2, i.e. M^*M - N^*N - Id >= 0", pos);
        add("round_dirac_kernel_dimension", "rarita", "ker D_TM = 0 for the round product", pos);

        const std::string df = "Sections of mode (j1,j2). E(12): Delta restricted to the co-closed primitive (1,1) "
                                "sections (kernel of delta on Lambda^(1,1)_0), Hermitian eigensolve. Deformations: "
                                "beta symmetric trace-free with delta beta = 0 and (D_TM - 3) Psi = 0, "
                                "Psi = sum_i (beta e_i).kappa (x) e_i, as one stacked kernel.";
        add("deformation_dimension_balance", "deform",
            "dim{(beta, kappa) infinitesimal deformations} = dim E(12) + dim K+", df);
        add("killing_spinor_dimension", "deform",
            "K+ (Killing spinors with number 1/2) is one dimensional on invariant sections; 0 for the round product",
            "Kernel of the stacked operator (nabla_i - 1/2 e_i.) over i.");
        add("killing_spinor_dirac", "deform", "D k = -3 k for k in K+", "Applied to the computed K+ basis.");
        add("deformation_chain", "deform",
            "for phi in E(12): sigma = -2/3 d phi, beta = h(phi) + S(sigma) gives tr beta = 0, delta beta = 0, "
            "D_TM Psi = 3 Psi, delta sigma = -8 phi",
            df + " Vacuous when E(12) is empty in the space.");
        add("deformation_intertwining", "deform",
            "(D_TM - 3) Psi^{beta(phi)} = 1/3 Psi^{h((Delta - 12) phi)} for every co-closed primitive (1,1) phi",
            df + " beta(phi) = h(phi) + S(-2/3 d phi), h(phi) = -J B_phi.");
        add("coclosed_differential_type", "deform",
            "d phi lies in Lambda^3_12 = primitive (2,1)+(1,2) for co-closed primitive (1,1) phi",
            df + " Projector onto Lambda^3_12 built from Sym- via S -> S_* psi+.");
        add("laplacian_invariance", "deform", "Delta preserves the co-closed primitive (1,1) sections", df);
        add("eigenvalue_match", "deform", "every counted E(12) eigenvalue is within 1e-6 of 12", df);
        add("eigenvalue_constraint_flags", "deform",
            "no eigenvalue near 12 is rejected by the co-closed primitive (1,1) constraint check", df);
        return m;
    }();
    return c;
}

inline std::string explain(const std::string& id) {
    const auto& c = explain_catalogue();
    auto it = c.find(id);
    if (it == c.end()) {
        std::string ids;
        for (const auto& [k, _] : c) ids += "  " + k + "\n";
        throw std::out_of_range("unknown identity id '" + id + "'. Valid ids:\n" + ids);
    }
    std::ostringstream o;
    o << id << " (" << it->second.suite << ")\n"
      << "  statement:    " << it->second.statement << "\n"
      << "  construction: " << it->second.construction << "\n";
    return o.str();
}

}  // namespace nkspin
