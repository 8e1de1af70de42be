#pragma once

// The bundled prelude and the elaborated class examples built on it.

#include <optional>
#include <string_view>
#include <vector>

#include "fd/diagnostic.hpp"
#include "fd/env.hpp"

namespace fd {

enum class BundledFile { Prelude, Superclasses, Fundeps };
std::string_view bundled_source(BundledFile f);

/// Bool: Booleans only. Maybe: the full prelude. EqOrd and Fundep add the
/// elaborated Eq/Ord and F programs.
enum class PreludeKind { Bool, Maybe, EqOrd, Fundep };

const std::vector<PreludeKind>& all_preludes();
std::string_view prelude_name(PreludeKind k);
std::optional<PreludeKind> parse_prelude_name(std::string_view s);

/// Checks the base prelude text (or `text` when given) plus the extras `k`
/// selects.
Result<Env> load_prelude(PreludeKind k, std::optional<std::string_view> text = {});

}  // namespace fd
