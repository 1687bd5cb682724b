#include "opret/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace opret {

Hash256 sha256(ByteSpan data) {
    Hash256 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw std::runtime_error("sha256: digest failed");
    return out;
}

Hash256 double_sha256(ByteSpan data) {
    Hash256 first = sha256(data);
    return sha256(ByteSpan(first.data(), first.size()));
}

} // namespace opret
