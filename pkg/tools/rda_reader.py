"""Minimal reader for R .rda (RDX2/RDX3, XDR) files holding data.frames.

Supports the SEXP types needed for plain data frames: pairlists, symbols,
character/integer/real/logical vectors, generic vectors, attributes, the
reference table, and the ALTREP wrappers R >= 3.5 emits (compact integer
sequences, wrapped vectors, deferred strings).
"""
import gzip
import struct
import sys

# SEXP type codes
NILSXP = 0
SYMSXP = 1
LISTSXP = 2
CHARSXP = 9
LGLSXP = 10
INTSXP = 13
REALSXP = 14
CPLXSXP = 15
STRSXP = 16
VECSXP = 19
RAWSXP = 24

REFSXP = 255
NILVALUE_SXP = 254
GLOBALENV_SXP = 253
ALTREP_SXP = 238

NA_INT = -2147483648


class RObj:
    def __init__(self, type_, value, attrs=None):
        self.type = type_
        self.value = value
        self.attrs = attrs or {}

    def attr(self, name, default=None):
        return self.attrs.get(name, default)


class Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.refs = []

    def u(self, fmt, size):
        v = struct.unpack_from(fmt, self.data, self.pos)[0]
        self.pos += size
        return v

    def read_int(self):
        return self.u(">i", 4)

    def read_double(self):
        return self.u(">d", 8)

    def read_bytes(self, n):
        b = self.data[self.pos:self.pos + n]
        self.pos += n
        return b

    def read_length(self):
        n = self.read_int()
        if n == -1:
            upper = self.read_int()
            lower = self.read_int()
            n = (upper << 32) + lower
        return n

    def read_header(self):
        if self.data[:2] == b"\x1f\x8b":
            raise ValueError("pass decompressed bytes")
        magic = self.data[:5]
        if magic not in (b"RDX2\n", b"RDX3\n"):
            raise ValueError(f"not an rda file: {magic!r}")
        self.pos = 5
        fmt = self.read_bytes(2)
        if fmt != b"X\n":
            raise ValueError(f"only XDR format supported, got {fmt!r}")
        version = self.read_int()
        self.read_int()  # writer R version
        self.read_int()  # min reader R version
        if version >= 3:
            enc_len = self.read_int()
            self.read_bytes(enc_len)  # native encoding name
        return version

    def read_item(self):
        flags = self.read_int()
        type_ = flags & 255
        has_attr = bool(flags & (1 << 9))
        has_tag = bool(flags & (1 << 10))

        if type_ == NILVALUE_SXP or type_ == NILSXP:
            return None
        if type_ == GLOBALENV_SXP:
            return RObj("globalenv", None)
        if type_ == REFSXP:
            idx = flags >> 8
            if idx == 0:
                idx = self.read_int()
            return self.refs[idx - 1]
        if type_ == SYMSXP:
            name = self.read_item()
            obj = RObj("symbol", name.value)
            self.refs.append(obj)
            return obj
        if type_ == LISTSXP:
            attrs = self.read_attrs_inline() if has_attr else {}
            tag = self.read_item() if has_tag else None
            car = self.read_item()
            cdr = self.read_item()
            pairs = [(tag.value if tag is not None else None, car)]
            if cdr is not None and isinstance(cdr, RObj) and cdr.type == "pairlist":
                pairs.extend(cdr.value)
            return RObj("pairlist", pairs, attrs)
        if type_ == CHARSXP:
            n = self.read_int()
            if n == -1:
                return RObj("char", None)
            return RObj("char", self.read_bytes(n).decode("utf-8", "replace"))
        if type_ == STRSXP:
            n = self.read_length()
            vals = [self.read_item().value for _ in range(n)]
            return self.with_attrs(RObj("str", vals), has_attr)
        if type_ == INTSXP or type_ == LGLSXP:
            n = self.read_length()
            vals = [self.read_int() for _ in range(n)]
            vals = [None if v == NA_INT else v for v in vals]
            return self.with_attrs(RObj("int", vals), has_attr)
        if type_ == REALSXP:
            n = self.read_length()
            vals = [self.read_double() for _ in range(n)]
            return self.with_attrs(RObj("real", vals), has_attr)
        if type_ == VECSXP:
            n = self.read_length()
            vals = [self.read_item() for _ in range(n)]
            return self.with_attrs(RObj("list", vals), has_attr)
        if type_ == ALTREP_SXP:
            info = self.read_item()   # pairlist: class sym, package sym, sexptype
            state = self.read_item()
            self.read_item()          # attributes (consumed; wrappers add none we need)
            return self.expand_altrep(info, state)
        if type_ == RAWSXP:
            n = self.read_length()
            return RObj("raw", self.read_bytes(n))
        raise ValueError(f"unhandled SEXP type {type_} at offset {self.pos}")

    def with_attrs(self, obj, has_attr):
        if has_attr:
            obj.attrs = self.read_attrs_inline()
        return obj

    def read_attrs_inline(self):
        plist = self.read_item()
        attrs = {}
        if plist is not None:
            for tag, car in plist.value:
                attrs[tag] = car
        return attrs

    def expand_altrep(self, info, state):
        cls = info.value[0][1].value  # class symbol name
        if cls == "compact_intseq":
            n, start, step = state.value
            return RObj("int", [int(start + i * step) for i in range(int(n))])
        if cls == "compact_realseq":
            n, start, step = state.value
            return RObj("real", [start + i * step for i in range(int(n))])
        if cls in ("wrap_real", "wrap_int", "wrap_lgl", "wrap_str", "wrap_raw", "wrap_cplx"):
            return state.value[0]  # list(data, metadata)
        if cls == "deferred_string":
            data = state.value[0]
            return RObj("str", [str(v) for v in data.value])
        raise ValueError(f"unhandled ALTREP class {cls}")


def load_rda(path):
    """Return {name: RObj} for every object stored in the .rda file."""
    with open(path, "rb") as f:
        raw = f.read()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    elif raw[:3] == b"BZh":
        import bz2
        raw = bz2.decompress(raw)
    elif raw[:6] == b"\xfd7zXZ\x00":
        import lzma
        raw = lzma.decompress(raw)
    r = Reader(raw)
    r.read_header()
    top = r.read_item()
    out = {}
    for tag, car in top.value:
        out[tag] = car
    return out


def frame_to_columns(df: RObj):
    """Return (colnames, columns) where factor columns are decoded to labels."""
    names = df.attr("names").value
    cols = []
    for col in df.value:
        levels = col.attr("levels")
        if levels is not None:
            lab = levels.value
            cols.append([None if v is None else lab[v - 1] for v in col.value])
        else:
            cols.append(col.value)
    return names, cols


if __name__ == "__main__":
    objs = load_rda(sys.argv[1])
    for name, obj in objs.items():
        names, cols = frame_to_columns(obj)
        print(name, "rows:", len(cols[0]) if cols else 0)
        print("columns:", names)
        for cname, c in list(zip(names, cols))[:30]:
            print(" ", cname, c[:8])
