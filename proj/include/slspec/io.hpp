#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "slspec/asymptotics.hpp"
#include "slspec/potential.hpp"
#include "slspec/prufer.hpp"
#include "slspec/sequence_space.hpp"

namespace slspec {

using Json = nlohmann::json;

/// Potential schema: {"kind":"fourier","c0":...,"cos":[...],"sin":[...]} or
/// {"kind":"piecewise_linear","x":[...],"y":[...]}; complex entries as
/// [re, im] pairs.
Json potential_to_json(const PotentialSpec& p);
PotentialSpec potential_from_json(const Json& j);

Json spectrum_to_json(const Spectrum& s);

/// CSV columns: n, re_rho, im_rho, re_lambda, im_lambda, residual.
std::string spectrum_to_csv(const Spectrum& s);

/// CSV columns: k, re, im.
std::string sequence_to_csv(const CVector& v);
Json sequence_to_json(const CVector& v);

Json hat_element_to_json(const HatElement& h);

/// 17-significant-digit decimal formatting used by every writer.
std::string format_real(Real x);

/// Write-then-rename so failures never leave partial files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace slspec
