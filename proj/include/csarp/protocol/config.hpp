#pragma once

#include "csarp/simnet/trace.hpp"
#include "csarp/wire/addr.hpp"

#include <cstdint>
#include <optional>

namespace csarp::protocol {

using simnet::Tick;

// Secure runs the Central Server scheme; Baseline is textbook ARP/DHCP.
enum class Mode { Secure, Baseline };

const char* to_string(Mode mode) noexcept;

struct CentralConfig {
    std::uint32_t n_probes = 50;
    Tick check_timeout = 100;
    // Check-initiating ARP replies admitted per window, across all sources.
    std::uint32_t rate_limit = 10;
    Tick rate_window = 1000;
};

struct HostConfig {
    Tick join_timeout = 50;
    Tick resolve_timeout = 20;
    Tick change_retry_timeout = 300;
    // Empty means retry forever.
    std::optional<std::uint32_t> max_change_retries = 20;
};

struct DhcpConfig {
    wire::Ipv4Addr pool_first = wire::Ipv4Addr{{10, 0, 0, 10}};
    std::uint32_t pool_size = 16;
    Tick ip_send_timeout = 10;
    std::uint32_t ip_send_max_retries = 5;
};

}  // namespace csarp::protocol
