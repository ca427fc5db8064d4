#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "privsketch/protocol.hpp"

namespace privsketch {

/// Binary report batch format ("PSKW"):
///   magic "PSKW" | version u8 (=1) | K u16 LE | M u16 LE | n u64 LE | mode u8
/// followed by n records. Sampled records (mode 0) are
///   row u16 | col u16 | value u8 (0 => -1, 1 => +1) | K*M ranks u32 LE
/// and full records (mode 1) are
///   ceil(K*M/8) bytes of cell bits (row-major, LSB first, 1 => +1) | ranks.
enum class ReportMode : std::uint8_t { sampled = 0, full = 1 };

struct ReportBatch {
    std::uint16_t k_count = 0;
    std::uint16_t m_size = 0;
    ReportMode mode = ReportMode::sampled;
    std::vector<UserReport> sampled;
    std::vector<FullReport> full;
};

void write_reports(std::ostream& out, std::span<const UserReport> reports,
                   std::uint16_t k_count, std::uint16_t m_size);
void write_reports(std::ostream& out, std::span<const FullReport> reports,
                   std::uint16_t k_count, std::uint16_t m_size);

/// Parses a batch, validating magic, version, mode and value bytes.
ReportBatch read_reports(std::istream& in);

void write_reports_file(const std::filesystem::path& path, std::span<const UserReport> reports,
                        std::uint16_t k_count, std::uint16_t m_size);
void write_reports_file(const std::filesystem::path& path, std::span<const FullReport> reports,
                        std::uint16_t k_count, std::uint16_t m_size);
ReportBatch read_reports_file(const std::filesystem::path& path);

} // namespace privsketch
