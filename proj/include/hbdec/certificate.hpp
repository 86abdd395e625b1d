#pragma once

// Certificate directories for the independent checker in verify.hpp.
// Relations are written as orbit literals and classes under fixed names.

#include <filesystem>
#include <string>

#include "hbdec/decide.hpp"
#include "hbdec/io.hpp"

namespace hbdec {

namespace detail {

inline BoundedClass renamed(const BoundedClass& k, std::string name) {
  BoundedClass out = k;
  out.name = std::move(name);
  return out;
}

/// The reduct with every relation as an orbit literal, over a renamed base.
inline Reduct as_orbits(const Reduct& c, std::string name, const std::string& base_name) {
  Reduct out{std::move(name), renamed(c.base, base_name), c.relations};
  for (auto& r : out.relations) r.formula.reset();
  return out;
}

inline void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace detail

inline void write_bidef_certificate(const std::filesystem::path& dir, const Verdict& v) {
  if (v.answer != Answer::yes || !v.witness) throw InputError("only YES verdicts carry a certificate");
  const auto& w = *v.witness;
  detail::prepare_dir(dir);
  write_file(dir / "certificate.txt", "kind bidef\nmode " + to_string(v.mode) + "\nlevel " + std::to_string(v.caps.k) +
                                          "\nsource " + w.source.name + "\ntarget " + w.target.name + "\n");
  auto a = detail::as_orbits(w.source, "source_expanded", "source");
  auto b = detail::as_orbits(w.target, "target_expanded", "target");
  write_file(dir / "structures.cls", serialize_class(a.base) + "\n" + serialize_class(b.base) + "\n" +
                                         serialize_reduct(a) + "\n" + serialize_reduct(b));
  std::string matching;
  for (const auto& [x, y] : w.matching) matching += x + " -> " + y + "\n";
  write_file(dir / "matching.txt", matching);
  write_file(dir / "xi.txt", w.xi.serialize());
  write_file(dir / "eta.txt", w.eta.serialize());
}

inline void write_pp_certificate(const std::filesystem::path& dir, const CorePresentation& core, const std::string& rel_name,
                                 const OrbitUnion& rel, const PolymorphismBehaviour& w) {
  detail::prepare_dir(dir);
  write_file(dir / "certificate.txt", "kind pp\nlevel " + std::to_string(w.level()) + "\narity " +
                                          std::to_string(w.arity) + "\nrelation " + rel_name + "\n");
  auto decl = detail::as_orbits(core.reduct_out, "core_reduct", "core");
  Reduct query{"query", decl.base, {RelationDef{rel_name, rel.arity, std::nullopt, rel}}};
  write_file(dir / "structures.cls", serialize_class(decl.base) + "\n" + serialize_reduct(decl) + "\n" +
                                         serialize_reduct(query));
  write_file(dir / "polymorphism.txt", w.serialize());
}

inline void write_core_certificate(const std::filesystem::path& dir, const Reduct& input, const CorePresentation& core) {
  detail::prepare_dir(dir);
  write_file(dir / "certificate.txt", "kind core\nlevel " + std::to_string(core.level) + "\ninput " + input.name +
                                          "\ncore " + core.reduct_out.name + "\n");
  auto in = detail::as_orbits(input, "input_reduct", "input");
  auto out = detail::as_orbits(core.reduct_out, "core_reduct", "core");
  write_file(dir / "structures.cls", serialize_class(in.base) + "\n" + serialize_class(out.base) + "\n" +
                                         serialize_reduct(in) + "\n" + serialize_reduct(out));
  write_file(dir / "witness.txt", core.witness.serialize());
}

}  // namespace hbdec
