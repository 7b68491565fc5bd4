#pragma once

#include "csarp/wire/dhcp_lite.hpp"
#include "csarp/wire/frame.hpp"

#include <string>
#include <vector>

namespace csarp::wire {

struct FieldView {
    std::string name;
    std::size_t offset;
    std::size_t width;
    std::string value;
};

// Field-by-field view of a frame in wire order, FCS included.
std::vector<FieldView> dissect(const Frame& frame);
std::vector<FieldView> dissect(const DhcpFrame& frame);

}  // namespace csarp::wire
