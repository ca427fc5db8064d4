#include "privsketch/wire.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace privsketch {

namespace {

constexpr char kMagic[4] = {'P', 'S', 'K', 'W'};
constexpr std::uint8_t kVersion = 1;

void put_u16(std::ostream& out, std::uint16_t v) {
    const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    out.write(bytes, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

std::uint8_t get_u8(std::istream& in) {
    char c;
    if (!in.get(c)) throw std::runtime_error("report batch: truncated input");
    return static_cast<std::uint8_t>(c);
}

std::uint16_t get_u16(std::istream& in) {
    const std::uint16_t lo = get_u8(in);
    const std::uint16_t hi = get_u8(in);
    return static_cast<std::uint16_t>(lo | (hi << 8));
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(get_u8(in)) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(get_u8(in)) << (8 * i);
    return v;
}

void write_header(std::ostream& out, std::uint16_t k_count, std::uint16_t m_size,
                  std::uint64_t n, ReportMode mode) {
    if (k_count < 1 || m_size < 2) throw std::invalid_argument("report batch: bad dimensions");
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    put_u16(out, k_count);
    put_u16(out, m_size);
    put_u64(out, n);
    out.put(static_cast<char>(mode));
}

void write_ordering(std::ostream& out, const OrderingMatrix& ordering) {
    for (std::uint32_t k = 0; k < ordering.k_count(); ++k) {
        for (std::uint32_t m = 0; m < ordering.m_size(); ++m) {
            put_u32(out, ordering.rank(k, m));
        }
    }
}

OrderingMatrix read_ordering(std::istream& in, std::uint16_t k_count, std::uint16_t m_size) {
    OrderingMatrix ordering(k_count, m_size);
    for (std::uint32_t k = 0; k < k_count; ++k) {
        for (std::uint32_t m = 0; m < m_size; ++m) {
            ordering.set_rank(k, m, get_u32(in));
        }
    }
    return ordering;
}

void check_dims(std::uint32_t k, std::uint32_t m, std::uint16_t k_count, std::uint16_t m_size) {
    if (k != k_count || m != m_size) {
        throw std::invalid_argument("report batch: report dimensions mismatch");
    }
}

} // namespace

void write_reports(std::ostream& out, std::span<const UserReport> reports,
                   std::uint16_t k_count, std::uint16_t m_size) {
    write_header(out, k_count, m_size, reports.size(), ReportMode::sampled);
    for (const UserReport& r : reports) {
        check_dims(r.ordering.k_count(), r.ordering.m_size(), k_count, m_size);
        if (r.perturbed_value != -1 && r.perturbed_value != 1) {
            throw std::invalid_argument("report batch: perturbed value must be -1 or +1");
        }
        put_u16(out, r.sampled_row);
        put_u16(out, r.sampled_col);
        out.put(static_cast<char>(r.perturbed_value == 1 ? 1 : 0));
        write_ordering(out, r.ordering);
    }
    if (!out) throw std::runtime_error("report batch: write failed");
}

void write_reports(std::ostream& out, std::span<const FullReport> reports,
                   std::uint16_t k_count, std::uint16_t m_size) {
    write_header(out, k_count, m_size, reports.size(), ReportMode::full);
    const std::uint32_t cells = static_cast<std::uint32_t>(k_count) * m_size;
    const std::uint32_t packed_bytes = (cells + 7) / 8;
    std::vector<char> packed(packed_bytes);
    for (const FullReport& r : reports) {
        check_dims(r.cells.k_count(), r.cells.m_size(), k_count, m_size);
        check_dims(r.ordering.k_count(), r.ordering.m_size(), k_count, m_size);
        std::fill(packed.begin(), packed.end(), 0);
        for (std::uint32_t idx = 0; idx < cells; ++idx) {
            if (r.cells.at(idx / m_size, idx % m_size) == 1) {
                packed[idx / 8] |= static_cast<char>(1 << (idx % 8));
            }
        }
        out.write(packed.data(), packed_bytes);
        write_ordering(out, r.ordering);
    }
    if (!out) throw std::runtime_error("report batch: write failed");
}

ReportBatch read_reports(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || magic[0] != kMagic[0] || magic[1] != kMagic[1] || magic[2] != kMagic[2] ||
        magic[3] != kMagic[3]) {
        throw std::runtime_error("report batch: bad magic");
    }
    const std::uint8_t version = get_u8(in);
    if (version != kVersion) {
        throw std::runtime_error("report batch: unsupported version " + std::to_string(version));
    }

    ReportBatch batch;
    batch.k_count = get_u16(in);
    batch.m_size = get_u16(in);
    if (batch.k_count < 1 || batch.m_size < 2) throw std::runtime_error("report batch: bad dimensions");
    const std::uint64_t n = get_u64(in);
    const std::uint8_t mode = get_u8(in);
    if (mode > 1) throw std::runtime_error("report batch: bad mode byte");
    batch.mode = static_cast<ReportMode>(mode);

    const std::uint32_t cells = static_cast<std::uint32_t>(batch.k_count) * batch.m_size;
    if (batch.mode == ReportMode::sampled) {
        batch.sampled.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint16_t row = get_u16(in);
            const std::uint16_t col = get_u16(in);
            if (row >= batch.k_count || col >= batch.m_size) {
                throw std::runtime_error("report batch: sampled cell out of range");
            }
            const std::uint8_t value = get_u8(in);
            if (value > 1) throw std::runtime_error("report batch: bad value byte");
            batch.sampled.push_back(UserReport{row, col,
                                               static_cast<std::int8_t>(value == 1 ? 1 : -1),
                                               read_ordering(in, batch.k_count, batch.m_size)});
        }
    } else {
        batch.full.reserve(n);
        const std::uint32_t packed_bytes = (cells + 7) / 8;
        std::vector<std::uint8_t> packed(packed_bytes);
        for (std::uint64_t i = 0; i < n; ++i) {
            for (std::uint32_t b = 0; b < packed_bytes; ++b) packed[b] = get_u8(in);
            SignMatrix matrix(batch.k_count, batch.m_size);
            for (std::uint32_t idx = 0; idx < cells; ++idx) {
                const bool bit = (packed[idx / 8] >> (idx % 8)) & 1;
                matrix.set(idx / batch.m_size, idx % batch.m_size, bit ? 1 : -1);
            }
            batch.full.push_back(FullReport{std::move(matrix),
                                            read_ordering(in, batch.k_count, batch.m_size)});
        }
    }
    return batch;
}

void write_reports_file(const std::filesystem::path& path, std::span<const UserReport> reports,
                        std::uint16_t k_count, std::uint16_t m_size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_reports(out, reports, k_count, m_size);
}

void write_reports_file(const std::filesystem::path& path, std::span<const FullReport> reports,
                        std::uint16_t k_count, std::uint16_t m_size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_reports(out, reports, k_count, m_size);
}

ReportBatch read_reports_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_reports(in);
}

} // namespace privsketch
