#include "text.hpp"

#include <openssl/evp.h>

#include <cctype>

namespace osst::text {

bool is_utf8_boundary(std::string_view s, std::size_t pos) {
    if (pos >= s.size()) return pos == s.size();
    return (static_cast<unsigned char>(s[pos]) & 0xC0) != 0x80;
}

std::vector<Codepoint> decode_utf8(std::string_view s) {
    std::vector<Codepoint> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        char32_t cp = b0;
        if (b0 >= 0xF0)
            len = 4;
        else if (b0 >= 0xE0)
            len = 3;
        else if (b0 >= 0xC0)
            len = 2;
        if (len > 1) {
            if (i + len > s.size()) {
                len = 1;  // truncated sequence, fall back to raw byte
            } else {
                char32_t v = b0 & (0x7F >> len);
                bool ok = true;
                for (std::size_t k = 1; k < len; ++k) {
                    unsigned char bk = static_cast<unsigned char>(s[i + k]);
                    if ((bk & 0xC0) != 0x80) {
                        ok = false;
                        break;
                    }
                    v = (v << 6) | (bk & 0x3F);
                }
                if (ok)
                    cp = v;
                else
                    len = 1;
            }
        }
        out.push_back({cp, i, len});
        i += len;
    }
    return out;
}

std::vector<std::size_t> codepoint_offsets(std::string_view s) {
    std::vector<std::size_t> out;
    for (const auto& cp : decode_utf8(s)) out.push_back(cp.offset);
    return out;
}

std::vector<std::string_view> whitespace_tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

}  // namespace osst::text
