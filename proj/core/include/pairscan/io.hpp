#ifndef PAIRSCAN_IO_HPP
#define PAIRSCAN_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "pairscan/diagnostics.hpp"
#include "pairscan/scenario.hpp"
#include "pairscan/second_level.hpp"

namespace pairscan {

// %.17g: round-trips any finite double bit-exactly through text, and
// reformatting a parsed value reproduces the same text, which is what makes
// write -> read -> write byte-identical.
std::string fmt17(double v);

std::string file_digest_hex(const std::string& path);  // fnv1a64 of bytes

// --- Delimited-text files. Every writer emits a `# pairscan <kind> v<N>`
// line, then a column-name header, then whitespace-separated rows.

void write_candidates_file(const std::string& path,
                           const std::vector<PulsePairCandidate>& candidates);
std::vector<PulsePairCandidate> read_candidates_file(const std::string& path,
                                                     const InstrumentConfig& cfg);

void write_pulses_file(const std::string& path,
                       const std::vector<PulseDetection>& pulses);
std::vector<PulseDetection> read_pulses_file(const std::string& path);

void write_frames_file(const std::string& path,
                       const std::vector<WindowRecord>& windows);
std::vector<WindowRecord> read_frames_file(const std::string& path);

void write_tags_file(const std::string& path, const std::vector<SegmentTag>& tags);
std::vector<SegmentTag> read_tags_file(const std::string& path);

void write_sun_mask_file(const std::string& path, const std::vector<MaskRow>& rows);

void write_sun_ephemeris_file(const std::string& path, const SunEphemeris& eph);

void write_exposure_file(const std::string& path, const ExposureModel& exposure,
                         const InstrumentConfig& cfg);
ExposureModel read_exposure_file(const std::string& path);

void write_heap_file(const std::string& path, const std::vector<HeapRecord>& heap,
                     const InstrumentConfig& cfg);
std::vector<HeapRecord> read_heap_file(const std::string& path);

void write_bins_file(const std::string& path, const std::vector<HeapRecord>& heap,
                     const InstrumentConfig& cfg);

void write_dois_file(const std::string& path, const std::vector<DoiReport>& dois);

void write_report_kv_file(const std::string& path, const std::string& kind,
                          const std::vector<std::pair<std::string, std::string>>& rows);

void write_highvis_file(const std::string& path,
                        const std::vector<WindowRecord>& windows);

// --- Run manifest (JSON). Stage entries carry record counts and an output
// inventory with content digests.

void manifest_init(const std::string& dir, const Scenario& scenario,
                   std::int64_t rfi_threshold_effective);
void manifest_stage(const std::string& dir, const std::string& stage,
                    const std::vector<std::pair<std::string, std::string>>& fields,
                    const std::vector<std::string>& output_paths);
Scenario manifest_scenario(const std::string& dir);
bool manifest_exists(const std::string& dir);

}  // namespace pairscan

#endif  // PAIRSCAN_IO_HPP
