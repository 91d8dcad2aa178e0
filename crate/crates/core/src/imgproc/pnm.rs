//! Binary PGM (P5) and PPM (P6) with maxval 255.

use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use super::{BinaryImage, GrayImage, ImageError, RgbImage};

#[derive(Debug, Error)]
pub enum PnmError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported magic {0:?}, expected P5 or P6")]
    BadMagic(String),
    #[error("expected {expected} image, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("malformed header: {0}")]
    Header(String),
    #[error("unsupported maxval {0}, only 255 is accepted")]
    MaxVal(u32),
    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error(transparent)]
    Image(#[from] ImageError),
}

enum Decoded {
    Gray(GrayImage),
    Rgb(RgbImage),
}

fn parse(bytes: &[u8]) -> Result<Decoded, PnmError> {
    let mut pos = 0;
    let mut tokens: Vec<String> = Vec::with_capacity(4);
    while tokens.len() < 4 {
        // skip whitespace and comments
        while pos < bytes.len() {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else if bytes[pos].is_ascii_whitespace() {
                pos += 1;
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(PnmError::Header("unexpected end of header".into()));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    // exactly one whitespace byte separates the header from the raster
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(PnmError::Header("missing separator after maxval".into()));
    }
    pos += 1;

    let channels = match tokens[0].as_str() {
        "P5" => 1,
        "P6" => 3,
        other => return Err(PnmError::BadMagic(other.to_string())),
    };
    let num = |s: &str, what: &str| {
        s.parse::<u32>()
            .map_err(|_| PnmError::Header(format!("bad {what} {s:?}")))
    };
    let width = num(&tokens[1], "width")? as usize;
    let height = num(&tokens[2], "height")? as usize;
    let maxval = num(&tokens[3], "maxval")?;
    if maxval != 255 {
        return Err(PnmError::MaxVal(maxval));
    }
    let expected = width * height * channels;
    let data = &bytes[pos..];
    if data.len() < expected {
        return Err(PnmError::Truncated {
            expected,
            found: data.len(),
        });
    }
    let data = &data[..expected];
    Ok(if channels == 1 {
        Decoded::Gray(GrayImage::new(width, height, data.to_vec())?)
    } else {
        let pixels = data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Decoded::Rgb(RgbImage::new(width, height, pixels)?)
    })
}

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage, PnmError> {
    match parse(bytes)? {
        Decoded::Gray(g) => Ok(g),
        Decoded::Rgb(_) => Err(PnmError::WrongKind {
            expected: "P5",
            found: "P6",
        }),
    }
}

pub fn decode_ppm(bytes: &[u8]) -> Result<RgbImage, PnmError> {
    match parse(bytes)? {
        Decoded::Rgb(c) => Ok(c),
        Decoded::Gray(_) => Err(PnmError::WrongKind {
            expected: "P6",
            found: "P5",
        }),
    }
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

/// Binary images are written with foreground as 255.
pub fn encode_binary_pgm(img: &BinaryImage) -> Vec<u8> {
    encode_pgm(&img.to_gray())
}

pub fn encode_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    for p in img.pixels() {
        out.extend_from_slice(p);
    }
    out
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage, PnmError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_pgm(&bytes)
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<RgbImage, PnmError> {
    decode_ppm(&std::fs::read(path)?)
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<(), PnmError> {
    std::fs::File::create(path)?.write_all(&encode_pgm(img))?;
    Ok(())
}

pub fn write_ppm(path: impl AsRef<Path>, img: &RgbImage) -> Result<(), PnmError> {
    std::fs::File::create(path)?.write_all(&encode_ppm(img))?;
    Ok(())
}
