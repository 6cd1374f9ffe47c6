#pragma once

namespace liprop {

// Library version, recorded in every emitted manifest. Identical config plus
// identical version guarantees byte-identical output files.
inline constexpr const char* version = "1.0.0";

} // namespace liprop
