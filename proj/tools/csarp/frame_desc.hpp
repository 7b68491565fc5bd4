#pragma once

#include "csarp/wire/frame.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace csarp::cli {

class DescriptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Frame types a description may name: the six custom messages plus
// "ArpRequest" and "ArpReply" for plain ARP.
const std::vector<std::string>& description_types();

// "auth" is "none", "demo" (material derived from demo_seed), or an object
// holding one of: tag_key | tag | sign_seed + root_seed [+ subject] |
// signature + cert. Throws DescriptionError on missing or invalid fields.
wire::Frame frame_from_description(const nlohmann::json& desc, std::uint64_t demo_seed);

// A complete description of one frame of the given type, with demo auth.
nlohmann::json sample_description(std::string_view type);

}  // namespace csarp::cli
