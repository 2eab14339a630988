#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtafp/errors.hpp"

namespace mtafp {

// Validated amino-acid string. Positions are 1-based everywhere in the
// harness. Accepts the 20 standard residues plus the extended codes
// B, Z, X, U, O unless strict mode is requested; '*' and '-' are rejected.
class AminoAcidSequence {
public:
    // Default-constructed sequences are empty placeholders; every validated
    // instance comes from from_string.
    AminoAcidSequence() = default;
    static AminoAcidSequence from_string(std::string_view text, bool strict = false);

    const std::string& str() const { return residues_; }
    std::size_t length() const { return residues_.size(); }
    char at(std::size_t position_1based) const;

    bool operator==(const AminoAcidSequence&) const = default;

private:
    explicit AminoAcidSequence(std::string residues) : residues_(std::move(residues)) {}
    std::string residues_;
};

bool is_valid_residue(char c, bool strict = false);

struct ProteinRecord {
    std::string id;          // first whitespace-delimited token after '>'
    std::string description; // remainder of the header line
    AminoAcidSequence sequence;

    bool operator==(const ProteinRecord&) const = default;
};

// Parses FASTA text. Sequence lines are concatenated, whitespace-stripped
// and uppercased; CRLF input is accepted. Throws ParseError on empty input,
// a header with no sequence, or a residue outside the alphabet (the message
// names the record, line and character).
std::vector<ProteinRecord> parse_fasta(std::string_view text, bool strict = false);

// Deterministic inverse of parse_fasta: ">id description" header, sequence
// wrapped at 60 columns, LF line endings.
std::string write_fasta(const std::vector<ProteinRecord>& records);

std::vector<ProteinRecord> read_fasta_file(const std::string& path, bool strict = false);
void write_fasta_file(const std::string& path, const std::vector<ProteinRecord>& records);

} // namespace mtafp
