#include "mtafp/sequence.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mtafp {

namespace {

constexpr std::string_view kStandardResidues = "ACDEFGHIKLMNPQRSTVWY";
constexpr std::string_view kExtendedResidues = "BZXUO";

std::string strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return std::string(line);
}

} // namespace

bool is_valid_residue(char c, bool strict) {
    char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (kStandardResidues.find(u) != std::string_view::npos) return true;
    if (!strict && kExtendedResidues.find(u) != std::string_view::npos) return true;
    return false;
}

AminoAcidSequence AminoAcidSequence::from_string(std::string_view text, bool strict) {
    if (text.empty()) throw ValidationError("amino-acid sequence must be non-empty");
    std::string residues;
    residues.reserve(text.size());
    for (char c : text) {
        if (!is_valid_residue(c, strict))
            throw ValidationError(std::string("invalid residue '") + c + "' in sequence");
        residues.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return AminoAcidSequence(std::move(residues));
}

char AminoAcidSequence::at(std::size_t position_1based) const {
    if (position_1based < 1 || position_1based > residues_.size())
        throw ValidationError("position " + std::to_string(position_1based) +
                              " out of range for sequence of length " +
                              std::to_string(residues_.size()));
    return residues_[position_1based - 1];
}

std::vector<ProteinRecord> parse_fasta(std::string_view text, bool strict) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ParseError("empty FASTA input");

    std::vector<ProteinRecord> records;
    std::string current_id, current_desc, current_seq;
    std::size_t header_line = 0;
    bool in_record = false;

    auto flush = [&]() {
        if (!in_record) return;
        if (current_seq.empty())
            throw ParseError("record '" + current_id + "' (line " + std::to_string(header_line) +
                             ") has no sequence");
        records.push_back(
            {current_id, current_desc, AminoAcidSequence::from_string(current_seq, strict)});
        current_seq.clear();
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw =
            eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        std::string line = strip_cr(raw);
        if (line.empty()) continue;

        if (line[0] == '>') {
            flush();
            std::string header = line.substr(1);
            std::size_t ws = header.find_first_of(" \t");
            if (ws == std::string::npos) {
                current_id = header;
                current_desc.clear();
            } else {
                current_id = header.substr(0, ws);
                std::size_t rest = header.find_first_not_of(" \t", ws);
                current_desc = rest == std::string::npos ? "" : header.substr(rest);
            }
            if (current_id.empty())
                throw ParseError("line " + std::to_string(line_no) + ": header with empty id");
            header_line = line_no;
            in_record = true;
        } else {
            if (!in_record)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": sequence data before any '>' header");
            for (char c : line) {
                if (std::isspace(static_cast<unsigned char>(c))) continue;
                if (!is_valid_residue(c, strict))
                    throw ParseError("invalid residue '" + std::string(1, c) + "' at record " +
                                     current_id + ", line " + std::to_string(line_no));
                current_seq.push_back(
                    static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            }
        }
    }
    flush();
    if (records.empty()) throw ParseError("FASTA input contains no records");
    return records;
}

std::string write_fasta(const std::vector<ProteinRecord>& records) {
    constexpr std::size_t kWrap = 60;
    std::string out;
    for (const auto& rec : records) {
        out.push_back('>');
        out.append(rec.id);
        if (!rec.description.empty()) {
            out.push_back(' ');
            out.append(rec.description);
        }
        out.push_back('\n');
        const std::string& seq = rec.sequence.str();
        for (std::size_t i = 0; i < seq.size(); i += kWrap) {
            out.append(seq, i, std::min(kWrap, seq.size() - i));
            out.push_back('\n');
        }
    }
    return out;
}

std::vector<ProteinRecord> read_fasta_file(const std::string& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open FASTA file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_fasta(buf.str(), strict);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_fasta_file(const std::string& path, const std::vector<ProteinRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write FASTA file: " + path);
    out << write_fasta(records);
}

} // namespace mtafp
