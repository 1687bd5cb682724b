#pragma once

#include "opret/store.hpp"

#include <cstdint>
#include <string>

namespace opret {

struct RpcError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The endpoint could not be reached at the transport level.
struct RpcUnreachableError : RpcError {
    using RpcError::RpcError;
};

// The node answered with an error object.
struct RpcErrorResponseError : RpcError {
    int code;
    std::string message;
    RpcErrorResponseError(int error_code, const std::string& error_message)
        : RpcError("rpc error " + std::to_string(error_code) + ": " + error_message),
          code(error_code), message(error_message) {}
};

// A requested height lies outside the node's chain.
struct HeightOutOfRangeError : RpcError {
    using RpcError::RpcError;
};

struct RpcConfig {
    std::string url = "http://127.0.0.1:8332";
    std::string username;
    std::string password;
    int timeout_ms = 15000;
};

struct HeightRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0; // inclusive
};

// Pulls blocks over the node's JSON-RPC (block hash by height, then the
// block with decoded transactions) and extracts OP_RETURN records with
// the same semantics as the raw-file scanner.
ScanResult fetch_blocks_rpc(const RpcConfig& config, const HeightRange& range,
                            const std::optional<StandardnessPolicy>& policy = std::nullopt);

} // namespace opret
