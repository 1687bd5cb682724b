#pragma once

#include "opret/bytes.hpp"

namespace opret {

Hash256 sha256(ByteSpan data);

// SHA-256 applied twice; the hash used for txids and block hashes.
Hash256 double_sha256(ByteSpan data);

} // namespace opret
