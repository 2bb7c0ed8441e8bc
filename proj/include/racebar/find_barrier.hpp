#ifndef RACEBAR_FIND_BARRIER_HPP
#define RACEBAR_FIND_BARRIER_HPP

#include <optional>

#include "racebar/construction_one.hpp"
#include "racebar/construction_three.hpp"
#include "racebar/construction_two.hpp"

namespace racebar {

enum class ConstructionChoice { Auto, I, II, III };

inline ConstructionChoice construction_choice_from_string(const std::string& s) {
  if (s == "auto") return ConstructionChoice::Auto;
  if (s == "I") return ConstructionChoice::I;
  if (s == "II") return ConstructionChoice::II;
  if (s == "III") return ConstructionChoice::III;
  throw ValidationError("unknown construction '" + s + "' (expected auto, I, II or III)");
}

/**
 * Construction I when a separating set exists, else construction II when the
 * spacing search finds a spacing character, else construction III.
 * A forced choice that does not apply raises ConstructionError.
 */
inline Barrier find_barrier(const RaceTriple& D, const CharacterGroup& cg, const BarrierParams& params,
                            ConstructionChoice choice = ConstructionChoice::Auto) {
  detail::require(cg.modulus() == D.q, "find_barrier: character group modulus mismatch");
  detail::require(params.sigma_cap > 0.5L, "find_barrier: sigma must exceed 1/2");
  detail::require(params.epsilon > 0.0L, "find_barrier: epsilon must be positive");
  std::optional<Barrier> b;
  auto separating = [&]() { return find_separating_set(D, cg); };
  switch (choice) {
    case ConstructionChoice::Auto: {
      if (auto s = separating()) {
        b = construction_one(D, *s, params);
      } else if (auto r = find_spacing_character(D, cg)) {
        if (auto* sc = std::get_if<SpacingCharacter>(&*r))
          b = construction_two(D, *sc, params);
        else
          b = construction_one(D, std::get<SeparatingSet>(*r), params);
      } else {
        b = construction_three(D, cg, params);
      }
      break;
    }
    case ConstructionChoice::I: {
      auto s = separating();
      if (!s) throw ConstructionError("construction I does not apply: no separating set for " + D.str());
      b = construction_one(D, *s, params);
      break;
    }
    case ConstructionChoice::II: {
      auto r = find_spacing_character(D, cg);
      if (!r || !std::holds_alternative<SpacingCharacter>(*r))
        throw ConstructionError("construction II does not apply: no spacing character for " + D.str());
      b = construction_two(D, std::get<SpacingCharacter>(*r), params);
      break;
    }
    case ConstructionChoice::III: {
      if (separating()) throw ConstructionError("construction III needs a triple without a separating set: " + D.str());
      b = construction_three(D, cg, params);
      break;
    }
  }
  for (const auto& z : b->zeros) {
    detail::ensure(z.sigma <= params.sigma_cap, "find_barrier: zero right of sigma");
    detail::ensure(z.gamma > params.tau, "find_barrier: zero below tau");
  }
  b->parameters["sigma_cap"] = static_cast<double>(params.sigma_cap);
  b->parameters["tau"] = static_cast<double>(params.tau);
  return *b;
}

inline Barrier find_barrier(const RaceTriple& D, const BarrierParams& params = {},
                            ConstructionChoice choice = ConstructionChoice::Auto) {
  return find_barrier(D, CharacterGroup(D.q), params, choice);
}

}  // namespace racebar

#endif  // RACEBAR_FIND_BARRIER_HPP
