//! ENVI header + raw binary reader/writer.
//!
//! Supported data type codes: 1 (u8), 2 (i16), 4 (f32), 5 (f64), 12 (u16), in
//! either byte order and any of BSQ/BIL/BIP interleave. Header keys this module
//! does not interpret are kept verbatim in the cube metadata and written back.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{CubeKind, Hypercube, Step};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const KIND_KEY: &str = "hsindt kind";
const PROVENANCE_KEY: &str = "hsindt provenance";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interleave {
    #[default]
    Bsq,
    Bil,
    Bip,
}

impl Interleave {
    pub const ALL: [Interleave; 3] = [Interleave::Bsq, Interleave::Bil, Interleave::Bip];

    pub fn as_str(self) -> &'static str {
        match self {
            Interleave::Bsq => "bsq",
            Interleave::Bil => "bil",
            Interleave::Bip => "bip",
        }
    }

    /// Position in the file stream of element `(i, j, b)`.
    #[inline]
    pub fn offset(self, dims: (usize, usize, usize), i: usize, j: usize, b: usize) -> usize {
        let (lines, samples, bands) = dims;
        match self {
            Interleave::Bsq => (b * lines + i) * samples + j,
            Interleave::Bil => (i * bands + b) * samples + j,
            Interleave::Bip => (i * samples + j) * bands + b,
        }
    }
}

impl fmt::Display for Interleave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Interleave {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bsq" => Ok(Interleave::Bsq),
            "bil" => Ok(Interleave::Bil),
            "bip" => Ok(Interleave::Bip),
            other => Err(Error::Header(format!("unknown interleave '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ByteOrder {
    #[default]
    Little,
    Big,
}

impl ByteOrder {
    pub fn code(self) -> u8 {
        match self {
            ByteOrder::Little => 0,
            ByteOrder::Big => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataType {
    U8,
    I16,
    F32,
    F64,
    U16,
}

impl DataType {
    pub const ALL: [DataType; 5] = [DataType::U8, DataType::I16, DataType::F32, DataType::F64, DataType::U16];

    pub fn from_code(code: u32) -> Result<Self> {
        match code {
            1 => Ok(DataType::U8),
            2 => Ok(DataType::I16),
            4 => Ok(DataType::F32),
            5 => Ok(DataType::F64),
            12 => Ok(DataType::U16),
            other => Err(Error::UnsupportedDataType(other)),
        }
    }

    pub fn code(self) -> u32 {
        match self {
            DataType::U8 => 1,
            DataType::I16 => 2,
            DataType::F32 => 4,
            DataType::F64 => 5,
            DataType::U16 => 12,
        }
    }

    pub fn size(self) -> usize {
        match self {
            DataType::U8 => 1,
            DataType::I16 | DataType::U16 => 2,
            DataType::F32 => 4,
            DataType::F64 => 8,
        }
    }

    /// Whether `v` survives a store/load through this type unchanged.
    pub fn represents(self, v: f64) -> bool {
        let integral = |lo: f64, hi: f64| v.fract() == 0.0 && v >= lo && v <= hi;
        match self {
            DataType::U8 => integral(0.0, u8::MAX as f64),
            DataType::I16 => integral(i16::MIN as f64, i16::MAX as f64),
            DataType::U16 => integral(0.0, u16::MAX as f64),
            DataType::F32 => v.is_nan() || (v as f32) as f64 == v,
            DataType::F64 => true,
        }
    }

    fn decode(self, bytes: &[u8], order: ByteOrder) -> f64 {
        macro_rules! read {
            ($t:ty) => {{
                let arr = bytes.try_into().expect("element width");
                match order {
                    ByteOrder::Little => <$t>::from_le_bytes(arr) as f64,
                    ByteOrder::Big => <$t>::from_be_bytes(arr) as f64,
                }
            }};
        }
        match self {
            DataType::U8 => bytes[0] as f64,
            DataType::I16 => read!(i16),
            DataType::U16 => read!(u16),
            DataType::F32 => read!(f32),
            DataType::F64 => read!(f64),
        }
    }

    fn encode(self, v: f64, order: ByteOrder, out: &mut Vec<u8>) {
        macro_rules! write {
            ($x:expr) => {{
                match order {
                    ByteOrder::Little => out.extend_from_slice(&$x.to_le_bytes()),
                    ByteOrder::Big => out.extend_from_slice(&$x.to_be_bytes()),
                }
            }};
        }
        match self {
            DataType::U8 => out.push(v as u8),
            DataType::I16 => write!(v as i16),
            DataType::U16 => write!(v as u16),
            DataType::F32 => write!(v as f32),
            DataType::F64 => write!(v),
        }
    }
}

/// Parsed ENVI header.
#[derive(Debug, Clone, PartialEq)]
pub struct EnviHeader {
    pub samples: usize,
    pub lines: usize,
    pub bands: usize,
    pub data_type: DataType,
    pub interleave: Interleave,
    pub byte_order: ByteOrder,
    pub header_offset: usize,
    pub wavelength: Option<Vec<f64>>,
    pub kind: Option<CubeKind>,
    pub provenance: Vec<Step>,
    /// Unrecognised `key = value` pairs, verbatim and in file order.
    pub extra: Vec<(String, String)>,
}

impl EnviHeader {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.by_ref().map(str::trim).find(|l| !l.is_empty()) {
            Some("ENVI") => {}
            _ => return Err(Error::Header("first line must be 'ENVI'".into())),
        }

        let mut pairs: Vec<(String, String)> = Vec::new();
        while let Some(line) = lines.next() {
            let Some((key, value)) = line.split_once('=') else {
                continue;
            };
            let key = key.trim().to_string();
            let mut value = value.trim().to_string();
            if value.starts_with('{') {
                while !value.contains('}') {
                    match lines.next() {
                        Some(more) => {
                            value.push('\n');
                            value.push_str(more.trim_end());
                        }
                        None => return Err(Error::Header(format!("unterminated '{{' for key '{key}'"))),
                    }
                }
            }
            pairs.push((key, value));
        }

        let mut samples = None;
        let mut nlines = None;
        let mut bands = None;
        let mut data_type = None;
        let mut interleave = None;
        let mut byte_order = ByteOrder::Little;
        let mut header_offset = 0usize;
        let mut wavelength = None;
        let mut kind = None;
        let mut provenance = Vec::new();
        let mut extra = Vec::new();

        for (key, value) in pairs {
            match key.to_ascii_lowercase().as_str() {
                "samples" => samples = Some(parse_count(&key, &value)?),
                "lines" => nlines = Some(parse_count(&key, &value)?),
                "bands" => bands = Some(parse_count(&key, &value)?),
                "data type" => {
                    let code = value
                        .parse::<u32>()
                        .map_err(|_| Error::Header(format!("bad data type '{value}'")))?;
                    data_type = Some(DataType::from_code(code)?);
                }
                "interleave" => interleave = Some(value.parse::<Interleave>()?),
                "byte order" => {
                    byte_order = match value.as_str() {
                        "0" => ByteOrder::Little,
                        "1" => ByteOrder::Big,
                        other => return Err(Error::Header(format!("bad byte order '{other}'"))),
                    }
                }
                "header offset" => header_offset = parse_count(&key, &value)?,
                "wavelength" => {
                    wavelength = Some(
                        brace_items(&value)
                            .map(|s| {
                                s.parse::<f64>()
                                    .map_err(|_| Error::Header(format!("bad wavelength '{s}'")))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "file type" => {}
                KIND_KEY => kind = Some(value.parse::<CubeKind>().map_err(|e| Error::Header(e.to_string()))?),
                PROVENANCE_KEY => {
                    let inner = value.trim().trim_start_matches('{').trim_end_matches('}');
                    provenance = inner
                        .split(" | ")
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(Step::parse)
                        .collect();
                }
                _ => extra.push((key, value)),
            }
        }

        let missing = |k: &str| Error::Header(format!("missing mandatory key '{k}'"));
        let header = EnviHeader {
            samples: samples.ok_or_else(|| missing("samples"))?,
            lines: nlines.ok_or_else(|| missing("lines"))?,
            bands: bands.ok_or_else(|| missing("bands"))?,
            data_type: data_type.ok_or_else(|| missing("data type"))?,
            interleave: interleave.ok_or_else(|| missing("interleave"))?,
            byte_order,
            header_offset,
            wavelength,
            kind,
            provenance,
            extra,
        };
        if header.samples == 0 || header.lines == 0 || header.bands == 0 {
            return Err(Error::Header("samples, lines and bands must be >= 1".into()));
        }
        if let Some(w) = &header.wavelength {
            if w.len() != header.bands {
                return Err(Error::Header(format!("{} wavelengths for {} bands", w.len(), header.bands)));
            }
        }
        Ok(header)
    }

    pub fn element_count(&self) -> usize {
        self.samples * self.lines * self.bands
    }

    /// Binary file length implied by the header.
    pub fn expected_file_len(&self) -> u64 {
        (self.element_count() * self.data_type.size() + self.header_offset) as u64
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.lines, self.samples, self.bands)
    }
}

impl fmt::Display for EnviHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ENVI")?;
        writeln!(f, "samples = {}", self.samples)?;
        writeln!(f, "lines = {}", self.lines)?;
        writeln!(f, "bands = {}", self.bands)?;
        writeln!(f, "header offset = {}", self.header_offset)?;
        writeln!(f, "file type = ENVI Standard")?;
        writeln!(f, "data type = {}", self.data_type.code())?;
        writeln!(f, "interleave = {}", self.interleave)?;
        writeln!(f, "byte order = {}", self.byte_order.code())?;
        if let Some(w) = &self.wavelength {
            let items: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            writeln!(f, "wavelength = {{{}}}", items.join(", "))?;
        }
        if let Some(kind) = self.kind {
            writeln!(f, "{KIND_KEY} = {kind}")?;
        }
        if !self.provenance.is_empty() {
            let steps: Vec<String> = self.provenance.iter().map(|s| s.to_string()).collect();
            writeln!(f, "{PROVENANCE_KEY} = {{{}}}", steps.join(" | "))?;
        }
        for (k, v) in &self.extra {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

fn parse_count(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::Header(format!("bad value '{value}' for '{key}'")))
}

fn brace_items(value: &str) -> impl Iterator<Item = &str> {
    value
        .trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
}

/// Options for [`write_envi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WriteOptions {
    pub interleave: Interleave,
    pub data_type: DataType,
    pub byte_order: ByteOrder,
}

impl Default for WriteOptions {
    fn default() -> Self {
        Self { interleave: Interleave::Bsq, data_type: DataType::F64, byte_order: ByteOrder::Little }
    }
}

impl WriteOptions {
    pub fn new(interleave: Interleave, data_type: DataType) -> Self {
        Self { interleave, data_type, ..Self::default() }
    }
}

/// Header path paired with a data path: the extension is replaced by `hdr`,
/// or `.hdr` is appended when there is none.
pub fn header_path_for(data_path: &Path) -> PathBuf {
    if data_path.extension().is_some() {
        data_path.with_extension("hdr")
    } else {
        let mut s = data_path.as_os_str().to_owned();
        s.push(".hdr");
        PathBuf::from(s)
    }
}

/// Finds the data file next to a `.hdr` header: same stem with `.img`, `.raw`,
/// `.dat`, `.bsq`, `.bil`, `.bip`, or no extension.
pub fn data_path_for(header_path: &Path) -> Result<PathBuf> {
    let stem = header_path.with_extension("");
    let mut candidates = vec![stem.clone()];
    for ext in ["img", "raw", "dat", "bsq", "bil", "bip"] {
        candidates.push(stem.with_extension(ext));
    }
    candidates
        .into_iter()
        .find(|p| p.is_file())
        .ok_or_else(|| Error::Header(format!("no data file found for header {}", header_path.display())))
}

/// Decodes a raw element stream into a band-sequential value vector.
pub fn decode_values<T: Scalar>(header: &EnviHeader, bytes: &[u8]) -> Result<Vec<T>> {
    let expected = header.expected_file_len();
    if bytes.len() as u64 != expected {
        return Err(Error::SizeMismatch { expected, actual: bytes.len() as u64 });
    }
    let payload = &bytes[header.header_offset..];
    let width = header.data_type.size();
    let dims = header.dims();
    let (lines, samples, bands) = dims;
    let mut values = vec![T::zero(); header.element_count()];
    for b in 0..bands {
        for i in 0..lines {
            for j in 0..samples {
                let at = header.interleave.offset(dims, i, j, b) * width;
                let v = header.data_type.decode(&payload[at..at + width], header.byte_order);
                values[(b * lines + i) * samples + j] = T::lit(v);
            }
        }
    }
    Ok(values)
}

/// Encodes a cube's values as an ENVI element stream (no header offset).
pub fn encode_values<T: Scalar>(cube: &Hypercube<T>, opts: &WriteOptions) -> Result<Vec<u8>> {
    let dims = cube.dims();
    let (lines, samples, bands) = dims;
    for (index, v) in cube.values().iter().enumerate() {
        let v = v.as_f64();
        if !opts.data_type.represents(v) {
            return Err(Error::NotRepresentable { value: v, index, code: opts.data_type.code() });
        }
    }
    let mut stream: Vec<usize> = vec![0; lines * samples * bands];
    for b in 0..bands {
        for i in 0..lines {
            for j in 0..samples {
                stream[opts.interleave.offset(dims, i, j, b)] = cube.index(i, j, b);
            }
        }
    }
    let mut out = Vec::with_capacity(stream.len() * opts.data_type.size());
    for src in stream {
        opts.data_type.encode(cube.values()[src].as_f64(), opts.byte_order, &mut out);
    }
    Ok(out)
}

/// Builds the header [`write_envi`] would emit for `cube`.
pub fn header_for<T: Scalar>(cube: &Hypercube<T>, opts: &WriteOptions) -> EnviHeader {
    EnviHeader {
        samples: cube.samples(),
        lines: cube.lines(),
        bands: cube.bands(),
        data_type: opts.data_type,
        interleave: opts.interleave,
        byte_order: opts.byte_order,
        header_offset: 0,
        wavelength: (!cube.wavelengths().is_empty()).then(|| cube.wavelengths().to_vec()),
        kind: Some(cube.kind()),
        provenance: cube.provenance().to_vec(),
        extra: cube.metadata().to_vec(),
    }
}

/// Writes `cube` to `data_path` plus its header; returns `(header_path, data_path)`.
pub fn write_envi<T: Scalar>(
    cube: &Hypercube<T>,
    data_path: impl AsRef<Path>,
    opts: &WriteOptions,
) -> Result<(PathBuf, PathBuf)> {
    let data_path = data_path.as_ref();
    if data_path.extension().is_some_and(|e| e.eq_ignore_ascii_case("hdr")) {
        return Err(Error::InvalidParameter("data path must not use the .hdr extension".into()));
    }
    let bytes = encode_values(cube, opts)?;
    let header_path = header_path_for(data_path);
    let text = header_for(cube, opts).to_string();
    fs::write(data_path, bytes).map_err(|e| Error::io(data_path, e))?;
    fs::write(&header_path, text).map_err(|e| Error::io(&header_path, e))?;
    Ok((header_path, data_path.to_path_buf()))
}

pub fn read_envi<T: Scalar>(header_path: impl AsRef<Path>, data_path: impl AsRef<Path>) -> Result<Hypercube<T>> {
    read_envi_with_header(header_path, data_path).map(|(_, cube)| cube)
}

/// Reads a cube and also returns the parsed header.
pub fn read_envi_with_header<T: Scalar>(
    header_path: impl AsRef<Path>,
    data_path: impl AsRef<Path>,
) -> Result<(EnviHeader, Hypercube<T>)> {
    let header_path = header_path.as_ref();
    let data_path = data_path.as_ref();
    let text = fs::read_to_string(header_path).map_err(|e| Error::io(header_path, e))?;
    let header = EnviHeader::parse(&text)?;
    let bytes = fs::read(data_path).map_err(|e| Error::io(data_path, e))?;
    let cube = cube_from_parts(&header, &bytes)?;
    Ok((header, cube))
}

/// Opens a cube from either its header or its data path.
pub fn open_envi<T: Scalar>(path: impl AsRef<Path>) -> Result<Hypercube<T>> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("hdr")) {
        read_envi(path, data_path_for(path)?)
    } else {
        read_envi(header_path_for(path), path)
    }
}

/// Assembles a cube from an already-parsed header and the raw file bytes.
pub fn cube_from_parts<T: Scalar>(header: &EnviHeader, bytes: &[u8]) -> Result<Hypercube<T>> {
    let values = decode_values::<T>(header, bytes)?;
    let mut cube = Hypercube::new(
        header.lines,
        header.samples,
        header.bands,
        values,
        header.wavelength.clone().unwrap_or_default(),
        header.kind.unwrap_or(CubeKind::RawRadiance),
    )
    .map_err(|e| Error::Header(e.to_string()))?
    .with_metadata(header.extra.clone())
    .with_provenance(header.provenance.clone());
    let mut step = Step::new("read_envi")
        .param("interleave", header.interleave)
        .param("data_type", header.data_type.code())
        .param("byte_order", header.byte_order.code());
    if header.header_offset > 0 {
        step = step.param("header_offset", header.header_offset);
    }
    cube = cube.record(step);
    Ok(cube)
}

/// Human-readable summary used by the CLI.
pub fn describe(header: &EnviHeader) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{} lines x {} samples x {} bands, type {}, {}",
        header.lines,
        header.samples,
        header.bands,
        header.data_type.code(),
        header.interleave
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(interleave: Interleave, data_type: DataType) -> EnviHeader {
        EnviHeader {
            samples: 2,
            lines: 2,
            bands: 2,
            data_type,
            interleave,
            byte_order: ByteOrder::Little,
            header_offset: 0,
            wavelength: None,
            kind: None,
            provenance: Vec::new(),
            extra: Vec::new(),
        }
    }

    fn cube_2x2x2() -> Hypercube<f64> {
        // value encodes (i, j, b) as 100i + 10j + b
        Hypercube::from_fn(2, 2, 2, CubeKind::Reflectance, |i, j, b| (100 * i + 10 * j + b) as f64)
    }

    #[test]
    fn bip_byte_stream_by_hand() {
        let opts = WriteOptions::new(Interleave::Bip, DataType::U8);
        let bytes = encode_values(&cube_2x2x2(), &opts).unwrap();
        // pixel-major: (0,0,0) (0,0,1) (0,1,0) (0,1,1) (1,0,0) ...
        assert_eq!(bytes, vec![0, 1, 10, 11, 100, 101, 110, 111]);
    }

    #[test]
    fn bil_and_bsq_byte_streams_by_hand() {
        let bil = encode_values(&cube_2x2x2(), &WriteOptions::new(Interleave::Bil, DataType::U8)).unwrap();
        assert_eq!(bil, vec![0, 10, 1, 11, 100, 110, 101, 111]);
        let bsq = encode_values(&cube_2x2x2(), &WriteOptions::new(Interleave::Bsq, DataType::U8)).unwrap();
        assert_eq!(bsq, vec![0, 10, 100, 110, 1, 11, 101, 111]);
    }

    #[test]
    fn big_endian_i16() {
        let c = Hypercube::<f64>::new(1, 1, 1, vec![-2.0], vec![], CubeKind::RawRadiance).unwrap();
        let opts = WriteOptions { byte_order: ByteOrder::Big, ..WriteOptions::new(Interleave::Bsq, DataType::I16) };
        assert_eq!(encode_values(&c, &opts).unwrap(), vec![0xff, 0xfe]);
        let mut h = header(Interleave::Bsq, DataType::I16);
        (h.samples, h.lines, h.bands, h.byte_order) = (1, 1, 1, ByteOrder::Big);
        assert_eq!(decode_values::<f64>(&h, &[0xff, 0xfe]).unwrap(), vec![-2.0]);
    }

    #[test]
    fn decode_inverts_encode_for_each_interleave() {
        let cube = cube_2x2x2();
        for il in Interleave::ALL {
            let bytes = encode_values(&cube, &WriteOptions::new(il, DataType::U16)).unwrap();
            let back = decode_values::<f64>(&header(il, DataType::U16), &bytes).unwrap();
            assert_eq!(back, cube.values());
        }
    }

    #[test]
    fn not_representable() {
        let c = Hypercube::<f64>::new(1, 1, 2, vec![1.0, 0.1], vec![], CubeKind::Reflectance).unwrap();
        let err = encode_values(&c, &WriteOptions::new(Interleave::Bsq, DataType::F32)).unwrap_err();
        assert!(matches!(err, Error::NotRepresentable { index: 1, code: 4, .. }));
        let err = encode_values(&c, &WriteOptions::new(Interleave::Bsq, DataType::U8)).unwrap_err();
        assert!(matches!(err, Error::NotRepresentable { index: 1, code: 1, .. }));
        let neg = Hypercube::<f64>::new(1, 1, 1, vec![-1.0], vec![], CubeKind::Reflectance).unwrap();
        assert!(encode_values(&neg, &WriteOptions::new(Interleave::Bsq, DataType::U16)).is_err());
    }

    #[test]
    fn size_mismatch() {
        let h = header(Interleave::Bsq, DataType::F32);
        let err = decode_values::<f64>(&h, &[0u8; 31]).unwrap_err();
        assert!(matches!(err, Error::SizeMismatch { expected: 32, actual: 31 }));
    }

    #[test]
    fn parse_header_with_braces_and_extras() {
        let text = "ENVI\ndescription = {\n  Scan of panel 3,\n  robot pass 2}\nsamples = 320\nlines   = 620\nbands = 3\nheader offset = 0\nfile type = ENVI Standard\ndata type = 4\ninterleave = bil\nsensor type = Unknown\nbyte order = 1\nwavelength units = Nanometers\nwavelength = {\n 950.0, 960.0,\n 970.0}\n";
        let h = EnviHeader::parse(text).unwrap();
        assert_eq!((h.samples, h.lines, h.bands), (320, 620, 3));
        assert_eq!(h.data_type, DataType::F32);
        assert_eq!(h.interleave, Interleave::Bil);
        assert_eq!(h.byte_order, ByteOrder::Big);
        assert_eq!(h.wavelength, Some(vec![950.0, 960.0, 970.0]));
        assert_eq!(h.extra.len(), 3);
        assert_eq!(h.extra[0].0, "description");
        assert_eq!(h.extra[0].1, "{\n  Scan of panel 3,\n  robot pass 2}");
        assert_eq!(h.extra[1], ("sensor type".to_string(), "Unknown".to_string()));
        // re-emitted header parses to the same thing
        assert_eq!(EnviHeader::parse(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn missing_keys_and_bad_codes() {
        let base = "ENVI\nsamples = 1\nlines = 1\nbands = 1\ndata type = 4\ninterleave = bsq\n";
        assert!(EnviHeader::parse(base).is_ok());
        for key in ["samples", "lines", "bands", "data type", "interleave"] {
            let text: String = base.lines().filter(|l| !l.starts_with(key)).map(|l| format!("{l}\n")).collect();
            let err = EnviHeader::parse(&text).unwrap_err();
            assert!(err.to_string().contains(key), "{err}");
        }
        let bad = base.replace("data type = 4", "data type = 6");
        assert!(matches!(EnviHeader::parse(&bad), Err(Error::UnsupportedDataType(6))));
        assert!(EnviHeader::parse("samples = 1\n").is_err());
    }

    #[test]
    fn header_offset_is_skipped() {
        let mut h = header(Interleave::Bsq, DataType::U8);
        (h.samples, h.lines, h.bands, h.header_offset) = (2, 1, 1, 3);
        let v = decode_values::<f64>(&h, &[9, 9, 9, 4, 5]).unwrap();
        assert_eq!(v, vec![4.0, 5.0]);
    }

    #[test]
    fn header_path_rules() {
        assert_eq!(header_path_for(Path::new("a/scan.img")), PathBuf::from("a/scan.hdr"));
        assert_eq!(header_path_for(Path::new("a/scan")), PathBuf::from("a/scan.hdr"));
    }
}
