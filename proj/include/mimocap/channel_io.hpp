#ifndef MIMOCAP_CHANNEL_IO_HPP
#define MIMOCAP_CHANNEL_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "mimocap/types.hpp"

namespace mimocap
{

///
/// Matrix file format: {"n_r": int, "n_t": int, "re": [[...]], "im": [[...]]},
/// row-major, "im" optional. Throws InputError on malformed content.
///
CMatrix parse_matrix_json(std::string_view text);
CMatrix load_matrix_file(const std::filesystem::path& path);

/// Serialise in the same format (always writes "im").
std::string matrix_to_json(const CMatrix& m, int indent = -1);

} // namespace mimocap

#endif
