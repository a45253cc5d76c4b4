#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <sstream>

#include "regulus/cli.hpp"
#include "regulus/congruence.hpp"
#include "regulus/error.hpp"
#include "regulus/etaq.hpp"
#include "regulus/identities.hpp"
#include "regulus/modform.hpp"
#include "regulus/numtheory.hpp"
#include "regulus/oracles.hpp"

namespace py = pybind11;
using namespace regulus;

namespace {

SeriesCache& shared_cache()
{
    static SeriesCache cache;
    return cache;
}

py::object to_py(const Integer& v)
{
    return py::reinterpret_steal<py::object>(PyLong_FromString(v.get_str().c_str(), nullptr, 10));
}

py::list to_py(const std::vector<Integer>& vs)
{
    py::list out;
    for (const auto& v : vs) {
        out.append(to_py(v));
    }
    return out;
}

py::object report_dict(const VerificationReport& r)
{
    static auto* loads = new py::object(py::module_::import("json").attr("loads"));
    return (*loads)(to_json_line(r));
}

py::list report_list(const std::vector<VerificationReport>& rs)
{
    py::list out;
    for (const auto& r : rs) {
        out.append(report_dict(r));
    }
    return out;
}

py::object verify_named(const std::string& id, std::optional<std::uint64_t> nmax)
{
    auto& cache = shared_cache();
    for (const auto& rel : named_relations()) {
        if (rel.id == id) {
            const auto cap = rel.nmax_within(cache.budget());
            if (!cap) {
                fail(ErrorKind::TruncationBudgetExceeded, id + " starts beyond the budget");
            }
            return report_dict(verify_relation(rel, std::min(nmax.value_or(*cap), *cap), cache));
        }
    }
    const auto& claim = find_claim(id);
    const auto cap = claim.nmax_within(cache.budget());
    if (!cap) {
        fail(ErrorKind::TruncationBudgetExceeded, id + " starts beyond the budget");
    }
    const auto n = std::min(nmax.value_or(1000), *cap);
    return report_dict(claim.rule ? verify_conditional(claim, n, cache) : verify_instance(claim, n, cache));
}

std::string rational_str(const Rational& q) { return q.get_str(); }

py::dict modcheck(const std::string& text)
{
    const auto spec = cli::parse_eta_spec(text);
    const auto ono = check_ono_conditions(spec);
    py::dict d;
    d["spec"] = spec.to_string();
    d["level"] = spec.level;
    d["weight"] = rational_str(weight(spec));
    d["conditions_met"] = ono.pass;
    d["reasons"] = ono.reasons;
    py::list cusps;
    for (const auto dd : divisors(spec.level)) {
        cusps.append(py::make_tuple(dd, rational_str(cusp_order(spec, dd))));
    }
    d["cusp_orders"] = cusps;
    if (!ono.pass) {
        d["verdict"] = "conditions not met";
        return d;
    }
    const auto chi = character_of(spec);
    d["character"] = chi.to_string();
    const auto v = is_holomorphic(spec);
    d["verdict"] = v.kind == HolomorphyVerdict::Kind::Cusp          ? "cusp form"
                   : v.kind == HolomorphyVerdict::Kind::Holomorphic ? "holomorphic modular form"
                                                                      : "not holomorphic";
    return d;
}

FamilyParams family_params(const py::kwargs& kw)
{
    FamilyParams fp;
    auto opt = [&](const char* name, std::optional<std::int64_t>& slot) {
        if (kw.contains(name)) {
            slot = kw[name].cast<std::int64_t>();
        }
    };
    opt("alpha", fp.alpha);
    opt("k", fp.k);
    opt("j", fp.j);
    opt("p", fp.p);
    opt("r", fp.r);
    opt("s", fp.s);
    opt("t", fp.t);
    opt("ell", fp.ell);
    if (kw.contains("primes")) {
        fp.primes = kw["primes"].cast<std::vector<std::uint64_t>>();
    }
    for (const auto& item : kw) {
        const auto key = item.first.cast<std::string>();
        static const char* known[] = {"alpha", "k", "j", "p", "r", "s", "t", "ell", "primes"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            fail(ErrorKind::UnknownSelection, "unknown family parameter '" + key + "'");
        }
    }
    return fp;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Tuple regular partition series: expansion and congruence verification";

    // Leaked on purpose: the type must outlive every translated exception.
    static PyObject* exc_type = PyErr_NewException("regulus._core.RegulusError", PyExc_ValueError, nullptr);
    m.attr("RegulusError") = py::handle(exc_type).inc_ref();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object inst = py::reinterpret_steal<py::object>(PyObject_CallFunction(exc_type, "s", e.what()));
            inst.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(exc_type, inst.ptr());
        }
    });

    m.def(
        "expand",
        [](const std::string& series, std::size_t trunc, std::uint64_t modulus) {
            const auto fq = cli::parse_fquotient(series);
            const auto ring = modulus == 0 ? RingSpec::exact() : RingSpec::modulo(modulus);
            return to_py(expand_fquotient(fq, trunc, ring).to_integers());
        },
        py::arg("series"), py::arg("trunc"), py::arg("modulus") = 0,
        "Coefficients 0..trunc of an f-quotient such as 'f2^3 / f1^3'; reduced when modulus > 0.");

    m.def(
        "count_tuple", [](int ell, int k, std::size_t nmax) { return to_py(count_tuple(ell, k, nmax).values); },
        py::arg("ell"), py::arg("k"), py::arg("nmax"), "Independent count of k-tuples of ell-regular partitions.");

    m.def("identity_ids", [] {
        std::vector<std::string> ids;
        for (const auto& e : identity_catalog()) {
            ids.push_back(e.id);
        }
        return ids;
    });
    m.def(
        "verify_identity", [](const std::string& id, std::size_t trunc) { return report_dict(verify_identity(id, trunc)); },
        py::arg("id"), py::arg("trunc") = 300);

    m.def("claim_ids", [] {
        std::vector<std::string> ids;
        for (const auto& c : named_claims()) {
            ids.push_back(c.id);
        }
        for (const auto& r : named_relations()) {
            ids.push_back(r.id);
        }
        return ids;
    });
    m.def("verify_claim", &verify_named, py::arg("id"), py::arg("nmax") = py::none(),
          "Checks a named congruence or relation; nmax defaults to 1000 for claims.");

    m.def("family_ids", &family_ids);
    m.def(
        "family_claims",
        [](const std::string& id, const py::kwargs& kw) {
            py::list out;
            for (const auto& c : generate_family(id, family_params(kw))) {
                out.append(py::make_tuple(c.id, c.progression.a, c.progression.b, c.modulus));
            }
            return out;
        },
        py::arg("id"), "(id, a, b, modulus) for each generated instance.");
    m.def(
        "verify_family",
        [](const std::string& id, std::size_t trunc, unsigned jobs, const py::kwargs& kw) {
            const auto claims = kw.empty() ? default_family_instances(id) : generate_family(id, family_params(kw));
            std::vector<VerificationReport> reports;
            {
                py::gil_scoped_release release;
                reports = verify_batch(claims, trunc, shared_cache(), jobs);
            }
            return report_list(reports);
        },
        py::arg("id"), py::kw_only(), py::arg("trunc") = 200'000, py::arg("jobs") = 1,
        "Verifies a theorem family; without parameters the default instances are used.");

    m.def(
        "density",
        [](const std::string& series, std::uint64_t modulus, std::uint64_t a, std::uint64_t b, std::uint64_t residue,
           std::vector<std::uint64_t> checkpoints) {
            const auto rep = density_scan(Progression{cli::parse_fquotient(series), a, b}, modulus, residue,
                                          std::move(checkpoints), shared_cache());
            py::list out;
            for (const auto& p : rep.points) {
                out.append(py::make_tuple(p.x, p.count, p.proportion));
            }
            return out;
        },
        py::arg("series"), py::arg("modulus"), py::kw_only(), py::arg("a") = 1, py::arg("b") = 0,
        py::arg("residue") = 0, py::arg("checkpoints") = std::vector<std::uint64_t>{1'000, 10'000},
        "(X, count, proportion) of n in [0, X) with coefficient(a n + b) == residue (mod modulus).");

    m.def(
        "discover",
        [](const std::string& series, std::uint64_t modulus, std::uint64_t amax, std::uint64_t nmax,
           std::uint64_t min_support) {
            py::list out;
            for (const auto& c :
                 discover(cli::parse_fquotient(series), modulus, amax, nmax, min_support, shared_cache())) {
                py::dict d;
                d["a"] = c.a;
                d["b"] = c.b;
                d["checked"] = c.checked;
                d["primitive"] = c.primitive;
                out.append(d);
            }
            return out;
        },
        py::arg("series"), py::arg("modulus"), py::kw_only(), py::arg("amax") = 9, py::arg("nmax") = 200,
        py::arg("min_support") = 10);

    m.def("modcheck", &modcheck, py::arg("spec"), "Weight, character, cusp orders and verdict for 'N=16; eta(4)^6'.");
    m.def(
        "b_series_check",
        [](int ell, std::uint64_t p, int a, int mm, int k, std::size_t trunc) {
            const auto r = b_series_check({.ell = ell, .p = p, .a = a, .m = mm, .k = k}, trunc);
            py::dict d = report_dict(r.report);
            d["adopted_level"] = r.adopted_level;
            d["minimal_level"] = r.minimal_level;
            d["weight"] = rational_str(r.weight);
            d["holomorphic"] = r.holomorphy.kind != HolomorphyVerdict::Kind::Fail;
            return d;
        },
        py::arg("ell"), py::arg("p"), py::arg("a"), py::arg("m"), py::arg("k"), py::arg("trunc") = 2400);

    m.def("omega", [](std::uint64_t p) { return to_py(t2_omega(p)); }, py::arg("p"));
    m.def("tau", [](std::size_t nmax) { return to_py(tau_exact(nmax)); }, py::arg("nmax"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
