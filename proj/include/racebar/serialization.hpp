#ifndef RACEBAR_SERIALIZATION_HPP
#define RACEBAR_SERIALIZATION_HPP

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "racebar/gsh.hpp"

namespace racebar {

using json = nlohmann::ordered_json;

inline constexpr const char* kBarrierFormat = "racebar-barrier/1";
inline constexpr const char* kGshFormat = "racebar-gsh/1";

namespace detail {

inline json triple_json(const RaceTriple& t) { return json::array({t.a[0], t.a[1], t.a[2]}); }

inline json permutation_json(const Permutation& p) { return json::array({p[0], p[1], p[2]}); }

inline Permutation permutation_from(const json& j) {
  auto v = j.get<std::vector<int>>();
  require(v.size() == 3, "permutation must have three entries");
  Permutation p{v[0], v[1], v[2]};
  permutation_rank(p);
  return p;
}

inline RaceTriple triple_from(Int q, const json& j) {
  auto v = j.get<std::vector<Int>>();
  require(v.size() == 3, "triple must have three residues");
  return RaceTriple(q, v[0], v[1], v[2]);
}

inline DirichletCharacter character_from(const std::shared_ptr<const UnitGroup>& group, const json& j) {
  auto h = j.get<std::vector<Int>>();
  require(h.size() == group->generators().size(), "character exponent vector has the wrong length");
  return DirichletCharacter(group, std::move(h));
}

inline json complex_json(std::complex<long double> z) {
  return json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())});
}

template <class F>
auto parse_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed file: ") + e.what());
  } catch (const VerificationError& e) {
    throw ValidationError(std::string("inconsistent file: ") + e.what());
  }
}

}  // namespace detail

inline json to_json(const Barrier& b) {
  json j;
  j["format"] = kBarrierFormat;
  j["q"] = b.q();
  j["triple"] = detail::triple_json(b.triple);
  j["relabeling"] = detail::permutation_json(b.relabeling);
  j["labeled"] = detail::triple_json(b.labeled);
  j["construction"] = to_string(b.construction);
  j["beta1"] = static_cast<double>(b.beta1);
  j["zeros"] = json::array();
  for (const auto& z : b.zeros)
    j["zeros"].push_back({{"character", z.character.exponents()},
                          {"sigma", static_cast<double>(z.sigma)},
                          {"gamma", static_cast<double>(z.gamma)},
                          {"multiplicity", z.multiplicity}});
  j["excluded"] = detail::permutation_json(b.excluded);
  j["verification_u"] = static_cast<double>(b.verification_u);
  j["parameters"] = json(b.parameters);
  j["margins"] = json(b.margins);
  return j;
}

inline Barrier barrier_from_json(const json& j) {
  return detail::parse_guard([&] {
    detail::require(j.at("format").get<std::string>() == kBarrierFormat, "not a barrier file");
    Barrier b;
    Int q = j.at("q").get<Int>();
    b.triple = detail::triple_from(q, j.at("triple"));
    b.relabeling = detail::permutation_from(j.at("relabeling"));
    b.labeled = detail::triple_from(q, j.at("labeled"));
    b.construction = construction_from_string(j.at("construction").get<std::string>());
    b.beta1 = j.at("beta1").get<double>();
    auto group = UnitGroup::make(q);
    for (const auto& z : j.at("zeros"))
      b.zeros.push_back({detail::character_from(group, z.at("character")), z.at("sigma").get<double>(),
                         z.at("gamma").get<double>(), z.at("multiplicity").get<Int>()});
    b.excluded = detail::permutation_from(j.at("excluded"));
    b.verification_u = j.at("verification_u").get<double>();
    b.parameters = j.at("parameters").get<std::map<std::string, double>>();
    b.margins = j.at("margins").get<std::map<std::string, double>>();
    check_barrier(b);
    return b;
  });
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  detail::require(static_cast<bool>(out), "cannot write " + path);
  out << text;
  detail::require(static_cast<bool>(out), "write failed for " + path);
}

inline json parse_json(const std::string& text) {
  return detail::parse_guard([&] { return json::parse(text); });
}

inline void save_barrier(const Barrier& b, const std::string& path) { write_text(path, to_json(b).dump(2) + "\n"); }

inline Barrier load_barrier(const std::string& path) { return barrier_from_json(parse_json(read_text(path))); }

/// The chi2 family is stored by its parameters and h_j; reading rebuilds it and checks h_j.
inline json to_json(const GshBarrier& g) {
  json j;
  j["format"] = kGshFormat;
  j["q"] = g.triple.q;
  j["triple"] = detail::triple_json(g.triple);
  j["relabeling"] = detail::permutation_json(g.relabeling);
  j["labeled"] = detail::triple_json(g.labeled);
  j["construction"] = "GSH";
  j["chi1"] = g.chi1.exponents();
  j["chi2"] = g.chi2.exponents();
  j["t"] = static_cast<double>(g.t);
  j["sigma1"] = static_cast<double>(g.sigma1);
  j["sigma2"] = static_cast<double>(g.sigma2);
  j["beta"] = static_cast<double>(g.beta);
  j["J"] = g.J;
  j["c_delta"] = static_cast<double>(g.c_delta);
  j["Z"] = detail::complex_json(g.Z);
  j["W"] = detail::complex_json(g.W);
  j["alpha"] = static_cast<double>(g.alpha);
  j["beta_phase"] = static_cast<double>(g.beta_phase);
  j["excluded"] = detail::permutation_json(g.excluded);
  j["h"] = g.h;
  return j;
}

inline GshBarrier gsh_from_json(const json& j) {
  return detail::parse_guard([&] {
    detail::require(j.at("format").get<std::string>() == kGshFormat, "not a GSH barrier file");
    Int q = j.at("q").get<Int>();
    auto triple = detail::triple_from(q, j.at("triple"));
    GshParams p;
    p.t = j.at("t").get<double>();
    p.sigma1 = j.at("sigma1").get<double>();
    p.sigma2 = j.at("sigma2").get<double>();
    p.beta = j.at("beta").get<double>();
    p.J = j.at("J").get<std::size_t>();
    auto g = construction_gsh(triple, p);
    detail::ensure(g.t == p.t, "stored t is not admissible");
    detail::ensure(detail::permutation_from(j.at("relabeling")) == g.relabeling, "relabeling mismatch");
    detail::ensure(j.at("chi1").get<std::vector<Int>>() == g.chi1.exponents(), "chi1 mismatch");
    detail::ensure(j.at("chi2").get<std::vector<Int>>() == g.chi2.exponents(), "chi2 mismatch");
    detail::ensure(j.at("h").get<std::vector<Int>>() == g.h, "h sequence mismatch");
    return g;
  });
}

inline void save_gsh(const GshBarrier& g, const std::string& path) { write_text(path, to_json(g).dump() + "\n"); }

inline GshBarrier load_gsh(const std::string& path) { return gsh_from_json(parse_json(read_text(path))); }

/// Positions of the labeled triple, 1-based and largest first, or "tie".
inline std::string ordering_code(std::size_t bucket) {
  if (bucket >= kPermutations.size()) return "tie";
  const auto& p = kPermutations[bucket];
  return fmt::format("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1);
}

inline std::string profile_csv(const RaceProfile& prof) {
  std::string out = "u,D1,D2,ordering\n";
  for (std::size_t i = 0; i < prof.u.size(); ++i)
    out += fmt::format("{:.14e},{:.14e},{:.14e},{}\n", static_cast<double>(prof.u[i]),
                       static_cast<double>(prof.D1[i]), static_cast<double>(prof.D2[i]),
                       ordering_code(prof.ordering[i]));
  return out;
}

}  // namespace racebar

#endif
