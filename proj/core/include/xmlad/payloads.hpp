#pragma once

// Bundled attack payloads for the injector. They are inert strings: nothing
// here is ever executed.

#include <string>
#include <string_view>
#include <vector>

namespace xmlad::payloads {

const std::vector<std::string>& xss();
const std::vector<std::string>& xpath();
/// Script bodies carried base64-encoded inside CDATA sections.
const std::vector<std::string>& cdata_scripts();
/// `<script>eval(atob('...'))</script>` wrapper around cdata_scripts()[i].
std::string cdata_payload(std::size_t index);

/// Percent-encodes every byte outside [A-Za-z0-9-_.~].
std::string percent_encode(std::string_view raw);
std::string base64(std::string_view raw);

/// Opening chapter excerpt of "The Wonderful Wizard of Oz" (public domain).
std::string_view leakage_text();
/// Splits on '.', '!' or '?' followed by whitespace; trims each sentence.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace xmlad::payloads
