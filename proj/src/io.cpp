#include "apisum/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "apisum/error.hpp"

namespace apisum::io {

namespace fs = std::filesystem;

namespace {

std::ifstream open_for_read(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorCode::kFileNotFound, path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot open " + path.string());
    }
    return in;
}

}  // namespace

std::string read_file(const fs::path& path) {
    auto in = open_for_read(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void for_each_line(const fs::path& path,
                   const std::function<void(std::string_view, std::size_t)>& on_line) {
    auto in = open_for_read(path);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        on_line(line, number);
    }
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::kIoError, "cannot rename into " + path.string());
    }
}

}  // namespace apisum::io
