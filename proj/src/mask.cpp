#include "bookmem/mask.hpp"

#include <sstream>

namespace bookmem {

std::string mask_to_rle(const CoverageMask& mask) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, e] : mask.runs()) {
        if (!first) os << ',';
        os << b << '-' << e;
        first = false;
    }
    return os.str();
}

CoverageMask mask_from_rle(const std::string& rle, size_t n_bits) {
    CoverageMask mask(n_bits);
    std::istringstream is(rle);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        const auto dash = item.find('-');
        if (dash == std::string::npos) throw std::invalid_argument("bad rle item: " + item);
        const size_t b = std::stoull(item.substr(0, dash));
        const size_t e = std::stoull(item.substr(dash + 1));
        if (e > n_bits || b > e) throw std::invalid_argument("rle range out of bounds: " + item);
        mask.set_range(b, e);
    }
    return mask;
}

namespace {
constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    throw std::invalid_argument("bad base64 character");
}
} // namespace

std::string mask_to_base64(const CoverageMask& mask) {
    // Bit i of the mask is bit (i % 8) of byte (i / 8), LSB first.
    std::vector<uint8_t> bytes((mask.size() + 7) / 8, 0);
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask.test(i)) bytes[i / 8] |= uint8_t(1u << (i % 8));
    std::string out;
    for (size_t i = 0; i < bytes.size(); i += 3) {
        uint32_t v = uint32_t(bytes[i]) << 16;
        if (i + 1 < bytes.size()) v |= uint32_t(bytes[i + 1]) << 8;
        if (i + 2 < bytes.size()) v |= bytes[i + 2];
        out.push_back(kB64[(v >> 18) & 63]);
        out.push_back(kB64[(v >> 12) & 63]);
        out.push_back(i + 1 < bytes.size() ? kB64[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < bytes.size() ? kB64[v & 63] : '=');
    }
    return out;
}

CoverageMask mask_from_base64(const std::string& b64, size_t n_bits) {
    std::vector<uint8_t> bytes;
    uint32_t acc = 0;
    int have = 0;
    for (char c : b64) {
        if (c == '=') break;
        acc = (acc << 6) | uint32_t(b64_value(c));
        have += 6;
        if (have >= 8) {
            have -= 8;
            bytes.push_back(uint8_t((acc >> have) & 0xFF));
        }
    }
    CoverageMask mask(n_bits);
    for (size_t i = 0; i < n_bits; ++i)
        if (i / 8 < bytes.size() && (bytes[i / 8] >> (i % 8)) & 1) mask.set(i);
    return mask;
}

} // namespace bookmem
