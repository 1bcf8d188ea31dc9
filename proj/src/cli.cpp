#include "unialg/cli.hpp"

#include <chrono>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "detail/json_util.hpp"
#include "unialg/congruence.hpp"
#include "unialg/free_algebra.hpp"
#include "unialg/homomorphism.hpp"
#include "unialg/io.hpp"
#include "unialg/pseudovariety.hpp"
#include "unialg/verify.hpp"

namespace unialg::cli {

namespace {

using detail::Json;

struct Options {
  bool json = false;
  std::size_t k = 2;
  std::size_t m_bound = 3;
  std::size_t arity_bound = 3;
  std::size_t size_bound = 6;
  std::size_t max_elements = 1'000'000;
  std::uint64_t seed = 1;

  std::vector<std::string> algebras;
  std::vector<std::string> bases;
  std::vector<Element> tuple;
  std::string mode = "generators";
  std::string ops = "H,S,P";
  bool canonical = false;

  Limits limits() const {
    Limits l;
    l.max_elements = max_elements;
    return l;
  }
};

// A computed report: the JSON document and its human rendering.
struct Outcome {
  std::optional<bool> verdict;
  Json certificates = Json::array();
  Json result = Json::object();
  std::vector<std::string> variety;
  std::vector<std::string> notes;
  std::string text;
};

std::vector<FiniteAlgebra> load_all(const std::vector<std::string>& paths) {
  std::vector<FiniteAlgebra> out;
  for (const auto& p : paths) {
    out.push_back(parse_algebra_file(p));
  }
  return out;
}

std::vector<std::string> names_of(const std::vector<FiniteAlgebra>& algebras) {
  std::vector<std::string> out;
  for (const auto& a : algebras) {
    out.push_back(a.name());
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i ? sep : "") + parts[i];
  }
  return out;
}

template <class T>
std::string list(const std::vector<T>& values) {
  std::vector<std::string> parts;
  for (const auto& v : values) {
    parts.push_back(std::to_string(v));
  }
  return "(" + join(parts, ",") + ")";
}

std::string labels(const Partition& p) { return detail::partition_json(p).dump(); }

std::string table_text(const FiniteAlgebra& a, std::size_t s) {
  std::ostringstream out;
  const auto table = a.table(s);
  const std::size_t arity = a.signature()[s].arity;
  if (arity == 2) {
    for (std::size_t x = 0; x < a.size(); ++x) {
      out << "   ";
      for (std::size_t y = 0; y < a.size(); ++y) {
        out << ' ' << table[x * a.size() + y];
      }
      out << '\n';
    }
  } else {
    out << "   ";
    for (Element v : table) {
      out << ' ' << v;
    }
    out << '\n';
  }
  return out.str();
}

Json checks_json(const VerificationReport& report) {
  Json out = Json::array();
  for (const auto& c : report.checks) {
    out.push_back(Json{{"name", c.name},
                       {"checked", c.checked},
                       {"failures", c.failures},
                       {"examples", c.examples}});
  }
  return out;
}

std::string checks_text(const VerificationReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << "  " << std::left << std::setw(44) << c.name << (c.passed() ? "pass" : "FAIL")
        << "  (" << c.checked << " checked, " << c.failures << " failed)\n";
    for (const auto& e : c.examples) {
      out << "      " << e << '\n';
    }
  }
  for (const auto& n : report.notes) {
    out << "  note: " << n << '\n';
  }
  return out.str();
}

Outcome show(const Options& o) {
  const FiniteAlgebra a = parse_algebra_file(o.algebras.at(0));
  Outcome r;
  const auto gens = minimal_generating_set(a);
  r.result = Json{{"algebra", detail::algebra_json(a)}, {"minimal_generating_set", gens}};
  if (o.canonical) {
    r.result["canonical"] = serialize_algebra(a);
    r.text = serialize_algebra(a);
    return r;
  }
  std::ostringstream out;
  out << "algebra " << a.name() << ", " << a.size() << " elements\n";
  for (std::size_t s = 0; s < a.signature().size(); ++s) {
    out << "  " << a.signature()[s].name << "/" << a.signature()[s].arity << ":\n"
        << table_text(a, s);
  }
  out << "  minimal generating set " << list(gens) << '\n';
  r.text = out.str();
  return r;
}

Outcome free(const Options& o) {
  const auto base = load_all(o.bases);
  const FreeAlgebra f = free_algebra(o.k, base, o.limits());
  Outcome r;
  r.variety = names_of(base);
  Json elements = Json::array();
  std::ostringstream out;
  out << "F_" << o.k << " over V(" << join(r.variety, ", ") << "): " << f.size()
      << " elements\n";
  for (Element e = 0; e < f.size(); ++e) {
    Json values = Json::array();
    std::vector<std::string> blocks;
    for (std::size_t b = 0; b < base.size(); ++b) {
      const auto v = f.values(e, b);
      values.push_back(std::vector<Element>(v.begin(), v.end()));
      blocks.push_back(Json(std::vector<Element>(v.begin(), v.end())).dump());
    }
    elements.push_back(Json{{"index", e},
                            {"witness", detail::term_json(f.witness(e), f.signature())},
                            {"values", values}});
    out << "  " << std::setw(4) << e << "  " << std::left << std::setw(24)
        << f.witness(e).to_string(f.signature()) << std::right << ' ' << join(blocks, " ")
        << '\n';
  }
  std::vector<Element> projections;
  for (std::size_t v = 1; v <= o.k; ++v) {
    projections.push_back(f.projection(v));
  }
  r.result = Json{{"arity", o.k},
                  {"size", f.size()},
                  {"projections", projections},
                  {"elements", elements}};
  r.text = out.str();
  return r;
}

Outcome conlat(const Options& o) {
  const FiniteAlgebra a = parse_algebra_file(o.algebras.at(0));
  const auto lattice = congruence_lattice(a, o.limits());
  Outcome r;
  Json cons = Json::array();
  std::ostringstream out;
  out << lattice.size() << " congruences of " << a.name() << '\n';
  for (const auto& p : lattice) {
    cons.push_back(detail::partition_json(p));
    out << "  " << labels(p) << '\n';
  }
  r.result = Json{{"algebra", a.name()}, {"count", lattice.size()}, {"congruences", cons}};
  r.text = out.str();
  return r;
}

Json certificate_json(const MembershipCertificate& cert, const Signature& signature,
                      const std::string& problem) {
  Json j;
  if (const auto* p = std::get_if<PositiveCertificate>(&cert)) {
    j = Json{{"kind", "positive"},
             {"tuple", p->tuple},
             {"free_size", p->free.size()},
             {"kernel", detail::partition_json(p->kernel)},
             {"quotient", detail::algebra_json(p->quotient)},
             {"homomorphism", p->hom.map()}};
  } else if (const auto* n = std::get_if<NegativeCertificate>(&cert)) {
    j = Json{{"kind", "negative"},
             {"tuple", n->tuple},
             {"lhs", detail::term_json(n->lhs, signature)},
             {"rhs", detail::term_json(n->rhs, signature)}};
  } else {
    const auto& u = std::get<NegativeUniformCertificate>(cert);
    j = Json{{"kind", "negative_uniform"},
             {"tuple", u.tuple},
             {"free_size", u.free.size()},
             {"kernel", detail::partition_json(u.kernel)},
             {"arity_bound", u.arity_bound},
             {"tuple_bound", u.tuple_bound}};
  }
  j["verified"] = problem.empty();
  if (!problem.empty()) {
    j["problem"] = problem;
  }
  return j;
}

std::string certificate_text(const MembershipCertificate& cert, const FiniteAlgebra& b,
                             const std::string& problem) {
  std::ostringstream out;
  const auto& sig = b.signature();
  if (const auto* p = std::get_if<PositiveCertificate>(&cert)) {
    out << "  certificate: F_" << p->tuple.size() << " (" << p->free.size()
        << " elements) at generators " << list(p->tuple) << " has kernel with "
        << p->kernel.num_classes() << " classes; F/kernel -> " << b.name() << " is "
        << list(p->hom.map()) << '\n';
  } else if (const auto* n = std::get_if<NegativeCertificate>(&cert)) {
    out << "  certificate: " << n->lhs.to_string(sig) << " = " << n->rhs.to_string(sig)
        << " holds in the generators but fails in " << b.name() << " at " << list(n->tuple)
        << '\n';
  } else {
    const auto& u = std::get<NegativeUniformCertificate>(cert);
    out << "  certificate: no basis congruence of F_" << u.tuple.size()
        << " refines the kernel at " << list(u.tuple) << " " << labels(u.kernel)
        << " (arity bound " << u.arity_bound << ")\n";
  }
  out << "  re-verified: " << (problem.empty() ? "yes" : "NO, " + problem) << '\n';
  return out.str();
}

ClosureOps parse_ops(const std::string& text) {
  ClosureOps ops;
  for (char c : text) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'H':
        ops.homomorphic_images = true;
        break;
      case 'S':
        ops.subalgebras = true;
        break;
      case 'P':
        ops.products = true;
        break;
      case ',':
      case ' ':
        break;
      default:
        throw InvalidInputError(std::string("unknown closure operator '") + c +
                                "' (use H, S, P)");
    }
  }
  return ops;
}

Outcome member_cmd(const Options& o) {
  const FiniteAlgebra b = parse_algebra_file(o.algebras.at(0));
  const auto generators = load_all(o.bases);
  MembershipOptions mo;
  mo.limits = o.limits();
  if (!o.tuple.empty()) {
    mo.tuple = o.tuple;
  }
  Outcome r;
  r.variety = names_of(generators);
  std::optional<MembershipResult> found;
  std::string problem;
  if (o.mode == "generators") {
    found = member(b, generators, mo);
    problem = verify_certificate(b, generators, found->certificate);
  } else {
    const auto k = close_class(ClassOfAlgebras(generators), ClosureOps{true, true, true},
                               o.size_bound, mo.limits);
    const auto filter = filter_from_class(k, generators, o.arity_bound, mo.limits);
    found = member(b, filter, mo);
    problem = verify_certificate(b, generators, found->certificate, &filter);
    r.notes.push_back("filter built from the H, S, P closure of the generators within size " +
                      std::to_string(o.size_bound) + ", arities up to " +
                      std::to_string(o.arity_bound));
    if (k.truncated()) {
      r.notes.push_back("closure truncated at the size bound");
    }
    if (!found->member) {
      r.notes.push_back("negative verdicts in filter mode hold within the stated bounds");
    }
  }
  const MembershipResult& result = *found;
  r.verdict = result.member;
  r.certificates.push_back(certificate_json(result.certificate, b.signature(), problem));
  r.result = Json{{"algebra", b.name()}, {"mode", o.mode}, {"member", result.member}};
  std::ostringstream out;
  out << b.name() << (result.member ? " is" : " is not") << " in the pseudovariety generated by "
      << join(r.variety, ", ") << '\n'
      << certificate_text(result.certificate, b, problem);
  for (const auto& n : r.notes) {
    out << "  note: " << n << '\n';
  }
  r.text = out.str();
  return r;
}

Outcome close_cmd(const Options& o) {
  const auto algebras = load_all(o.algebras);
  const auto k = close_class(ClassOfAlgebras(algebras), parse_ops(o.ops), o.size_bound,
                             o.limits());
  Outcome r;
  r.variety = names_of(algebras);
  Json members = Json::array();
  std::ostringstream out;
  out << k.size() << " algebras up to isomorphism (size bound " << o.size_bound << ")"
      << (k.truncated() ? ", truncated" : "") << '\n';
  for (const auto& a : k.representatives()) {
    members.push_back(detail::algebra_json(a));
    out << "  " << std::setw(3) << a.size() << "  " << a.name() << '\n';
  }
  r.result = Json{{"ops", o.ops}, {"truncated", k.truncated()}, {"count", k.size()},
                  {"members", members}};
  r.text = out.str();
  return r;
}

Outcome verify_correspondence_cmd(const Options& o) {
  const auto base = load_all(o.bases);
  CorrespondenceOptions co;
  co.size_bound = o.size_bound;
  co.arity_bound = o.arity_bound;
  co.tuple_bound = o.m_bound;
  co.seed = o.seed;
  co.limits = o.limits();
  const auto report = verify_correspondence(base, co);
  Outcome r;
  r.variety = names_of(base);
  r.verdict = report.passed();
  r.notes = report.notes;
  r.result = Json{{"universe_size", report.universe_size},
                  {"generated_size", report.generated_size},
                  {"universe_truncated", report.universe_truncated},
                  {"free_sizes", report.free_sizes},
                  {"classes_sampled", report.classes_sampled},
                  {"families_sampled", report.families_sampled},
                  {"checks", checks_json(report)}};
  std::ostringstream out;
  out << "correspondence over V(" << join(r.variety, ", ") << "): universe "
      << report.universe_size << " algebras, " << report.generated_size << " generated, "
      << report.classes_sampled << " classes, " << report.families_sampled << " families\n"
      << checks_text(report) << (report.passed() ? "passed\n" : "FAILED\n");
  r.text = out.str();
  return r;
}

Outcome verify_pointwise_cmd(const Options& o) {
  const FiniteAlgebra a = parse_algebra_file(o.algebras.at(0));
  const auto report = verify_pointwise_uniformity(a, o.k, o.limits());
  Outcome r;
  r.variety = {a.name()};
  r.verdict = report.passed();
  Json covers = Json::array();
  std::ostringstream out;
  out << "pointwise entourages on F_" << o.k << " over V(" << a.name() << "), "
      << report.free_size << " elements\n"
      << checks_text(report);
  for (const auto& c : report.covers) {
    covers.push_back(Json{{"congruence", detail::partition_json(c.theta)},
                          {"tuples", c.tuples},
                          {"exact", c.exact}});
    std::vector<std::string> tuples;
    for (const auto& t : c.tuples) {
      tuples.push_back(list(t));
    }
    out << "  " << labels(c.theta) << (c.exact ? " = " : " contains ") << "meet over {"
        << join(tuples, " ") << "}\n";
  }
  out << (report.passed() ? "passed\n" : "FAILED\n");
  r.result = Json{{"arity", o.k},
                  {"free_size", report.free_size},
                  {"checks", checks_json(report)},
                  {"covers", covers}};
  r.text = out.str();
  return r;
}

Outcome entourages_cmd(const Options& o) {
  const FiniteAlgebra b = parse_algebra_file(o.algebras.at(0));
  std::vector<std::vector<Element>> tuples;
  if (!o.tuple.empty()) {
    tuples.push_back(o.tuple);
  } else {
    const auto total = checked_power(b.size(), o.k, o.max_elements);
    if (!total) {
      throw ResourceLimitError("too many tuples");
    }
    for (std::size_t code = 0; code < *total; ++code) {
      std::vector<Element> t(o.k);
      decode_tuple(code, b.size(), t);
      tuples.push_back(std::move(t));
    }
  }
  const std::size_t k = tuples.front().size();
  Outcome r;
  r.variety = {b.name()};
  Json list_json = Json::array();
  std::vector<Entourage> entourages;
  std::ostringstream out;
  std::size_t free_size = 0;
  std::ostringstream body;
  for (const auto& t : tuples) {
    const auto e = pointwise_entourage(b, k, t, o.limits());
    free_size = e.free.size();
    list_json.push_back(Json{{"tuple", t}, {"relation", detail::partition_json(e.relation)}});
    body << "  U" << list(t) << "  " << labels(e.relation) << '\n';
    entourages.push_back(e.as_entourage());
  }
  const auto axioms = verify_uniformity_axioms(entourages);
  r.verdict = axioms.passed();
  out << tuples.size() << " pointwise entourages on F_" << k << " over V(" << b.name() << "), "
      << free_size << " elements\n"
      << body.str() << checks_text(axioms);
  r.result = Json{{"arity", k},
                  {"free_size", free_size},
                  {"entourages", list_json},
                  {"axioms", checks_json(axioms)}};
  r.text = out.str();
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Finite universal algebra: free algebras, congruences, pseudovarieties",
               "unialg"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "Print a JSON report");
  app.add_option("--k", o.k, "Arity of free algebras and tuples")->capture_default_str();
  app.add_option("--m-bound", o.m_bound, "Tuple bound for inverse substitution")
      ->capture_default_str();
  app.add_option("--arity-bound", o.arity_bound, "Largest filter arity")->capture_default_str();
  app.add_option("--size-bound", o.size_bound, "Largest algebra in class closures")
      ->capture_default_str();
  app.add_option("--max-elements", o.max_elements, "Cap on constructed algebra sizes")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for sampled subclasses")->capture_default_str();

  auto* show_cmd = app.add_subcommand("show", "Print an algebra");
  show_cmd->add_option("--algebra", o.algebras, "Algebra file")->required()->expected(1);
  show_cmd->add_flag("--canonical", o.canonical, "Print the canonical file form");

  auto* free_cmd = app.add_subcommand("free", "Build the k-generated free algebra");
  free_cmd->add_option("--base", o.bases, "Base algebra files")->required();

  auto* conlat_cmd = app.add_subcommand("conlat", "List all congruences");
  conlat_cmd->add_option("--algebra", o.algebras, "Algebra file")->required()->expected(1);

  auto* member_sub = app.add_subcommand("member", "Decide pseudovariety membership");
  member_sub->add_option("--algebra", o.algebras, "Candidate algebra")->required()->expected(1);
  member_sub->add_option("--generators", o.bases, "Generating algebras")->required();
  member_sub->add_option("--mode", o.mode, "generators or filter")
      ->check(CLI::IsMember({"generators", "filter"}))
      ->capture_default_str();
  member_sub->add_option("--tuple", o.tuple, "Generating tuple of the candidate")
      ->delimiter(',');

  auto* close_sub = app.add_subcommand("close", "Close a class under H, S, P");
  close_sub->add_option("--algebra", o.algebras, "Algebra files")->required();
  close_sub->add_option("--ops", o.ops, "Operators, e.g. H,S,P")->capture_default_str();

  auto* corr_sub =
      app.add_subcommand("verify-correspondence", "Check the class/filter correspondence");
  corr_sub->add_option("--base", o.bases, "Base algebra files")->required();

  auto* point_sub =
      app.add_subcommand("verify-pointwise", "Check that point kernels generate the filter");
  point_sub->add_option("--algebra", o.algebras, "Algebra file")->required()->expected(1);

  auto* ent_sub = app.add_subcommand("entourages", "List pointwise entourages");
  ent_sub->add_option("--algebra", o.algebras, "Algebra file")->required()->expected(1);
  ent_sub->add_option("--tuple", o.tuple, "A single tuple instead of all k-tuples")
      ->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitTrue : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string operation = chosen->get_name();
  const auto start = std::chrono::steady_clock::now();
  auto report_head = [&]() {
    return Json{{"operation", operation},
                {"bounds",
                 {{"arity", operation == "free" || operation == "verify-pointwise" ||
                                    operation == "entourages"
                                ? o.k
                                : o.arity_bound},
                  {"tuple", o.m_bound},
                  {"size", o.size_bound}}}};
  };
  auto fail = [&](int code, const std::string& kind, const std::string& message,
                  const ParseError* parse) {
    err << "unialg " << operation << ": " << message << '\n';
    if (o.json) {
      Json report = report_head();
      Json e{{"kind", kind}, {"message", message}};
      if (parse != nullptr) {
        e["file"] = parse->file();
        if (parse->byte_offset() != std::numeric_limits<std::size_t>::max()) {
          e["byte_offset"] = parse->byte_offset();
        }
        if (!parse->json_path().empty()) {
          e["json_pointer"] = parse->json_path();
        }
      }
      report["error"] = e;
      out << report.dump(2) << '\n';
    }
    return code;
  };

  Outcome outcome;
  try {
    if (operation == "show") {
      outcome = show(o);
    } else if (operation == "free") {
      outcome = free(o);
    } else if (operation == "conlat") {
      outcome = conlat(o);
    } else if (operation == "member") {
      outcome = member_cmd(o);
    } else if (operation == "close") {
      outcome = close_cmd(o);
    } else if (operation == "verify-correspondence") {
      outcome = verify_correspondence_cmd(o);
    } else if (operation == "verify-pointwise") {
      outcome = verify_pointwise_cmd(o);
    } else {
      outcome = entourages_cmd(o);
    }
  } catch (const ParseError& e) {
    return fail(kExitUsage, "parse", e.what(), &e);
  } catch (const ResourceLimitError& e) {
    return fail(kExitResource, "resource_limit", e.what(), nullptr);
  } catch (const BoundExceededError& e) {
    return fail(kExitResource, "bound_exceeded", e.what(), nullptr);
  } catch (const NotInVarietyError& e) {
    return fail(kExitUsage, "not_in_variety", e.what(), nullptr);
  } catch (const Error& e) {
    return fail(kExitUsage, "invalid_input", e.what(), nullptr);
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (o.json) {
    Json report = report_head();
    report["variety"] = outcome.variety;
    report["verdict"] = outcome.verdict ? Json(*outcome.verdict) : Json(nullptr);
    report["certificates"] = outcome.certificates;
    report["result"] = outcome.result;
    report["notes"] = outcome.notes;
    report["timings"] = Json{{"total_ms", ms}};
    out << report.dump(2) << '\n';
  } else {
    out << outcome.text;
  }
  if (outcome.verdict && !*outcome.verdict) {
    return kExitFalse;
  }
  return kExitTrue;
}

}  // namespace unialg::cli
