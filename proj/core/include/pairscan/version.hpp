#ifndef PAIRSCAN_VERSION_HPP
#define PAIRSCAN_VERSION_HPP

namespace pairscan {

inline constexpr const char* kVersion = "0.1.0";

// Bumped when any persisted file schema changes.
inline constexpr int kFileFormatVersion = 1;

}  // namespace pairscan

#endif  // PAIRSCAN_VERSION_HPP
