#pragma once

#include <string>

namespace sonmf {

// Classic Porter stemming algorithm (the 1980 rule set).  Input must already
// be lowercase a-z; anything else is returned unchanged.
std::string porter_stem(const std::string& word);

}  // namespace sonmf
