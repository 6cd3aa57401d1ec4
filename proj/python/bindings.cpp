// Python bindings for the main operations. Matrices cross as complex numpy
// arrays; reports cross as JSON text and are parsed on the Python side.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lfree/closedform.hpp"
#include "lfree/constructions.hpp"
#include "lfree/experiments.hpp"
#include "lfree/moments.hpp"
#include "lfree/rmt.hpp"
#include "lfree/words.hpp"

namespace py = pybind11;
using namespace lfree;
using rmt::DenseOperator;
using rmt::Matrix;
using words::GroupPresentation;
using words::ReducedWord;

namespace {

std::vector<ReducedWord> parse_words(const std::vector<std::string>& texts,
                                     const GroupPresentation& pres) {
  std::vector<ReducedWord> out;
  for (const auto& t : texts) out.push_back(words::parse_word(t == "1" ? "" : t, pres));
  return out;
}

py::dict verdict_dict(const words::LeinertVerdict& v) {
  py::dict d;
  d["status"] = std::string(words::to_string(v.status));
  d["method"] = std::string(words::to_string(v.method));
  d["witness"] = v.witness ? py::cast(*v.witness) : py::none();
  d["note"] = v.note;
  return d;
}

std::vector<DenseOperator> to_operators(const std::vector<Matrix>& ms) {
  std::vector<DenseOperator> out;
  for (const auto& m : ms) out.emplace_back(m);
  return out;
}

std::vector<Matrix> to_matrices(const std::vector<DenseOperator>& xs) {
  std::vector<Matrix> out;
  for (const auto& x : xs) out.push_back(x.matrix());
  return out;
}

moments::MomentOptions moment_options(const std::string& arithmetic, std::size_t cap) {
  moments::MomentOptions o;
  o.support_cap = cap;
  if (arithmetic == "float") {
    o.arithmetic = moments::Arithmetic::floating;
  } else if (arithmetic != "exact") {
    throw std::invalid_argument("arithmetic must be 'exact' or 'float'");
  }
  return o;
}

py::list moment_rows(const moments::Convolver& L, int max_m, const moments::MomentOptions& o) {
  const auto seq = moments::moment_sequence(L, max_m, o);
  const auto best = moments::running_max_bounds(seq);
  py::list rows;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    py::dict r;
    r["m"] = seq[i].m;
    r["value"] = seq[i].value_string();
    r["lower_bound"] = seq[i].lower_bound;
    r["running_max"] = best[i];
    r["engine"] = seq[i].engine;
    r["provenance"] = seq[i].exact ? "exact" : "float";
    rows.append(r);
  }
  return rows;
}

rmt::RngSpec spec(std::uint64_t seed, std::uint64_t stream) { return {seed, stream}; }

std::string dump(const experiments::Report& r) { return r.to_json(false).dump(); }

experiments::Calibration calibration() { return experiments::Calibration::load(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Leinert sets, trace moments and L-free constructions";
  m.attr("__version__") = experiments::version();

  py::register_exception<words::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<constructions::AssertionFailure>(m, "AssertionFailure",
                                                          PyExc_ArithmeticError);

  // words
  m.def("reduce_word", [](const std::string& group, const std::string& word) {
    const auto pres = GroupPresentation::parse(group);
    return words::render(words::parse_word(word, pres), pres);
  }, py::arg("group"), py::arg("word"), "Normal form of a word; '' is the identity.");
  m.def("multiply", [](const std::string& group, const std::string& a, const std::string& b) {
    const auto pres = GroupPresentation::parse(group);
    return words::render(
        words::multiply(words::parse_word(a, pres), words::parse_word(b, pres), pres), pres);
  }, py::arg("group"), py::arg("a"), py::arg("b"));
  m.def("inverse", [](const std::string& group, const std::string& w) {
    const auto pres = GroupPresentation::parse(group);
    return words::render(words::inverse(words::parse_word(w, pres), pres), pres);
  }, py::arg("group"), py::arg("word"));
  m.def("leinert", [](const std::string& group, const std::vector<std::string>& ws,
                      const std::string& mode, int depth) {
    const auto pres = GroupPresentation::parse(group);
    const auto parsed = parse_words(ws, pres);
    if (mode == "exact") return verdict_dict(words::leinert_exact(parsed, pres));
    if (mode == "bounded") return verdict_dict(words::leinert_bounded(parsed, pres, depth));
    throw std::invalid_argument("mode must be 'exact' or 'bounded'");
  }, py::arg("group"), py::arg("words"), py::arg("mode") = "exact", py::arg("depth") = 6);
  m.def("verify_witness", [](const std::string& group, const std::vector<std::string>& ws,
                             const std::vector<int>& witness) {
    const auto pres = GroupPresentation::parse(group);
    return words::verify_witness(parse_words(ws, pres), witness, pres);
  }, py::arg("group"), py::arg("words"), py::arg("witness"));

  // moments
  m.def("moments", [](const std::string& group,
                      const std::vector<std::pair<std::string, std::string>>& terms, int max_m,
                      const std::string& arithmetic, std::size_t support_cap) {
    const auto pres = GroupPresentation::parse(group);
    std::vector<moments::Term> ts;
    for (const auto& [coef, word] : terms) {
      ts.push_back({GaussianRational::parse(coef), words::parse_word(word == "1" ? "" : word, pres)});
    }
    return moment_rows(moments::Convolver(pres, std::move(ts)), max_m,
                       moment_options(arithmetic, support_cap));
  }, py::arg("group"), py::arg("terms"), py::arg("max_m"), py::arg("arithmetic") = "exact",
     py::arg("support_cap") = 10'000'000,
     "tau((L*L)^m) for L = sum c*word, given as (coefficient, word) string pairs.");
  m.def("laplacian_moments", [](int k, int max_m, const std::string& arithmetic) {
    return moment_rows(moments::kesten_laplacian(k), max_m,
                       moment_options(arithmetic, 10'000'000));
  }, py::arg("k"), py::arg("max_m"), py::arg("arithmetic") = "exact");

  // closed forms
  m.def("kesten_norm", &closedform::kesten_norm, py::arg("k"));
  m.def("leinert_norm", [](int n) {
    const auto v = closedform::leinert_norm(n);
    return py::make_tuple(v.value, v.warning ? py::cast(*v.warning) : py::none());
  }, py::arg("n"), "(value, warning or None)");
  m.def("coefficient_bound", [](int n, const std::vector<std::complex<double>>& alphas) {
    return closedform::coefficient_bound(n, alphas);
  }, py::arg("n"), py::arg("alphas"));
  m.def("qpq_norm", &closedform::qpq_norm, py::arg("tau_p"), py::arg("tau_q"));
  m.def("qvq_norm", &closedform::qvq_norm, py::arg("tau_q"));
  m.def("paving_norm_bound", [](int n) { return closedform::paving_norm_bound(n).bound; },
        py::arg("n"));
  m.def("paving_size", [](double eps) { return closedform::paving_size(eps).n; },
        py::arg("epsilon"));

  // matrix model
  m.def("haar_unitary", [](int d, std::uint64_t seed, std::uint64_t stream) {
    return rmt::sample_haar_unitary(d, spec(seed, stream)).matrix();
  }, py::arg("d"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("projection", [](double tau, int d, std::uint64_t seed, std::uint64_t stream) {
    return rmt::sample_projection(tau, d, spec(seed, stream)).matrix();
  }, py::arg("tau"), py::arg("d"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("op_norm", [](const Matrix& x) { return rmt::op_norm(DenseOperator(x)); },
        py::arg("x"));
  m.def("lfree_defect", [](const std::vector<Matrix>& family, int max_len, bool index_distinct) {
    const auto ops = to_operators(family);
    const auto d = rmt::lfree_defect(ops, max_len,
                                     index_distinct ? rmt::DuplicatePolicy::index_distinct
                                                    : rmt::DuplicatePolicy::reject);
    py::dict r;
    r["max_abs_trace"] = d.max_abs_trace;
    r["worst_word"] = d.worst_word;
    r["worst_family"] = std::string(rmt::to_string(d.worst_family));
    r["words_checked"] = d.words_checked;
    return r;
  }, py::arg("family"), py::arg("max_len") = 6, py::arg("index_distinct") = false);

  // constructions
  m.def("dilate", [](const std::vector<Matrix>& xs, std::uint64_t seed, std::uint64_t stream) {
    if (xs.empty()) throw std::invalid_argument("dilate: no inputs");
    const auto res =
        constructions::dilate(to_operators(xs), static_cast<int>(xs[0].rows()), spec(seed, stream));
    py::dict r;
    r["unitaries"] = to_matrices(res.unitaries);
    r["c"] = to_matrices(res.c);
    r["d"] = to_matrices(res.d);
    r["max_unitarity_residual"] = res.max_unitarity_residual;
    return r;
  }, py::arg("xs"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("pave", [](int n, const Matrix& x, std::uint64_t seed, std::uint64_t stream) {
    const auto inst = constructions::build_paving(n, DenseOperator(x), spec(seed, stream));
    const auto meas = constructions::measure_paving(inst);
    py::dict r;
    r["projections"] = to_matrices(inst.projections);
    r["u"] = inst.u.matrix();
    r["norm"] = meas.norm;
    r["averaged_norm"] = meas.averaged_norm;
    r["identity_residual"] = meas.identity_residual;
    r["bound"] = closedform::paving_norm_bound(n).bound;
    return r;
  }, py::arg("n"), py::arg("x"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("random_contraction", [](int d, std::uint64_t seed, std::uint64_t stream) {
    auto engine = rmt::make_engine(spec(seed, stream));
    return constructions::random_contraction(d, engine).matrix();
  }, py::arg("d"), py::arg("seed") = 0, py::arg("stream") = 0);

  // seeded experiments (JSON reports)
  m.def("pave_report", [](int n, int d, int trials, std::uint64_t seed, int targets) {
    return dump(experiments::paving_experiment(n, d, trials, targets, seed, calibration().paving));
  }, py::arg("n"), py::arg("d"), py::arg("trials"), py::arg("seed"), py::arg("targets") = 5);
  m.def("qpq_report", [](double tau_p, double tau_q, int d, int trials, std::uint64_t seed) {
    return dump(experiments::qpq_experiment(tau_p, tau_q, d, trials, seed, calibration().qpq));
  }, py::arg("tau_p"), py::arg("tau_q"), py::arg("d"), py::arg("trials"), py::arg("seed"));
  m.def("sharpness_report", [](int n, const std::vector<double>& traces, int d, int trials,
                               std::uint64_t seed) {
    const auto cal = calibration();
    return dump(experiments::sharpness(n, traces, d, trials, seed, cal.sharpness_equal,
                                       cal.sharpness_margin));
  }, py::arg("n"), py::arg("traces"), py::arg("d"), py::arg("trials"), py::arg("seed"));
  m.def("dilation_defect_report", [](int n, int d, int max_len, int trials, std::uint64_t seed) {
    return dump(experiments::dilation_defect(n, d, max_len, trials, seed,
                                             calibration().lfree_defect_median));
  }, py::arg("n"), py::arg("d"), py::arg("max_len"), py::arg("trials"), py::arg("seed"));
}
