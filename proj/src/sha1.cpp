#include "qlab/util/sha1.hpp"

#include <array>
#include <cstring>
#include <vector>

namespace qlab {

namespace {

inline std::uint32_t rotl(std::uint32_t value, int bits) {
    return (value << bits) | (value >> (32 - bits));
}

}  // namespace

std::string sha1_hex(std::string_view data) {
    std::array<std::uint32_t, 5> h = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                                      0xC3D2E1F0u};

    const std::uint64_t bit_length = static_cast<std::uint64_t>(data.size()) * 8;
    std::vector<unsigned char> message(data.begin(), data.end());
    message.push_back(0x80);
    while (message.size() % 64 != 56) message.push_back(0x00);
    for (int shift = 56; shift >= 0; shift -= 8) {
        message.push_back(static_cast<unsigned char>((bit_length >> shift) & 0xFF));
    }

    std::array<std::uint32_t, 80> w{};
    for (std::size_t chunk = 0; chunk < message.size(); chunk += 64) {
        for (int i = 0; i < 16; ++i) {
            w[static_cast<std::size_t>(i)] =
                (static_cast<std::uint32_t>(message[chunk + 4 * static_cast<std::size_t>(i)]) << 24) |
                (static_cast<std::uint32_t>(message[chunk + 4 * static_cast<std::size_t>(i) + 1]) << 16) |
                (static_cast<std::uint32_t>(message[chunk + 4 * static_cast<std::size_t>(i) + 2]) << 8) |
                static_cast<std::uint32_t>(message[chunk + 4 * static_cast<std::size_t>(i) + 3]);
        }
        for (int i = 16; i < 80; ++i) {
            w[static_cast<std::size_t>(i)] =
                rotl(w[static_cast<std::size_t>(i - 3)] ^ w[static_cast<std::size_t>(i - 8)] ^
                         w[static_cast<std::size_t>(i - 14)] ^ w[static_cast<std::size_t>(i - 16)],
                     1);
        }

        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t temp = rotl(a, 5) + f + e + k + w[static_cast<std::size_t>(i)];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = temp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::string hex;
    hex.reserve(40);
    static const char digits[] = "0123456789abcdef";
    for (std::uint32_t word : h) {
        for (int shift = 28; shift >= 0; shift -= 4) {
            hex.push_back(digits[(word >> shift) & 0xF]);
        }
    }
    return hex;
}

std::string git_blob_sha1(std::string_view content) {
    std::string preimage = "blob " + std::to_string(content.size());
    preimage.push_back('\0');
    preimage.append(content);
    return sha1_hex(preimage);
}

}  // namespace qlab
