//! Canonical CBOR subset used by every binary wire format in this crate.
//!
//! Only the types our formats need are modeled: unsigned/negative integers,
//! byte strings, text strings, arrays, maps, tags and null. Encoding always
//! produces RFC 8949 deterministic form: shortest-length argument encoding,
//! definite lengths only, map entries sorted by the bytewise order of their
//! encoded keys. Decoding *enforces* the same rules, so any accepted buffer
//! re-encodes to the identical bytes. Size measurements all over this crate
//! rely on that byte-for-byte stability.

use std::fmt;

/// Nesting depth guard; our formats are at most 4 levels deep.
const MAX_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    /// Major type 0.
    Uint(u64),
    /// Major type 1; `Nint(n)` denotes the integer `-1 - n`.
    Nint(u64),
    Bytes(Vec<u8>),
    Text(String),
    Array(Vec<Value>),
    /// Entries are sorted by encoded key at encode time.
    Map(Vec<(Value, Value)>),
    Tag(u64, Box<Value>),
    Null,
}

impl Value {
    /// Convenience constructor for possibly-negative integer labels.
    pub fn int(v: i64) -> Value {
        if v >= 0 {
            Value::Uint(v as u64)
        } else {
            Value::Nint((-1 - v) as u64)
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match *self {
            Value::Uint(n) if n <= i64::MAX as u64 => Some(n as i64),
            Value::Nint(n) if n < i64::MAX as u64 => Some(-1 - n as i64),
            _ => None,
        }
    }

    pub fn as_bytes(&self) -> Option<&[u8]> {
        match self {
            Value::Bytes(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&[Value]> {
        match self {
            Value::Array(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_map(&self) -> Option<&[(Value, Value)]> {
        match self {
            Value::Map(entries) => Some(entries),
            _ => None,
        }
    }

    /// Looks up an integer-labeled map entry.
    pub fn map_get_int(&self, label: i64) -> Option<&Value> {
        let key = Value::int(label);
        self.as_map()?
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            Value::Uint(n) => write_head(out, 0, *n),
            Value::Nint(n) => write_head(out, 1, *n),
            Value::Bytes(b) => {
                write_head(out, 2, b.len() as u64);
                out.extend_from_slice(b);
            }
            Value::Text(t) => {
                write_head(out, 3, t.len() as u64);
                out.extend_from_slice(t.as_bytes());
            }
            Value::Array(items) => {
                write_head(out, 4, items.len() as u64);
                for item in items {
                    item.encode_into(out);
                }
            }
            Value::Map(entries) => {
                let mut encoded: Vec<(Vec<u8>, Vec<u8>)> = entries
                    .iter()
                    .map(|(k, v)| (k.to_bytes(), v.to_bytes()))
                    .collect();
                encoded.sort_by(|a, b| a.0.cmp(&b.0));
                write_head(out, 5, encoded.len() as u64);
                for (k, v) in encoded {
                    out.extend_from_slice(&k);
                    out.extend_from_slice(&v);
                }
            }
            Value::Tag(tag, inner) => {
                write_head(out, 6, *tag);
                inner.encode_into(out);
            }
            Value::Null => out.push(0xf6),
        }
    }

    /// Decodes one complete value; trailing bytes are an error.
    pub fn from_bytes(data: &[u8]) -> Result<Value, DecodeError> {
        let mut r = Reader { data, pos: 0 };
        let v = r.read_value(0)?;
        if r.pos != data.len() {
            return Err(DecodeError::TrailingBytes);
        }
        Ok(v)
    }
}

fn write_head(out: &mut Vec<u8>, major: u8, arg: u64) {
    let m = major << 5;
    if arg < 24 {
        out.push(m | arg as u8);
    } else if arg <= u8::MAX as u64 {
        out.push(m | 24);
        out.push(arg as u8);
    } else if arg <= u16::MAX as u64 {
        out.push(m | 25);
        out.extend_from_slice(&(arg as u16).to_be_bytes());
    } else if arg <= u32::MAX as u64 {
        out.push(m | 26);
        out.extend_from_slice(&(arg as u32).to_be_bytes());
    } else {
        out.push(m | 27);
        out.extend_from_slice(&arg.to_be_bytes());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("trailing bytes after value")]
    TrailingBytes,
    #[error("indefinite lengths are not accepted")]
    IndefiniteLength,
    #[error("integer argument is not minimally encoded")]
    NonMinimalHead,
    #[error("map keys are not in canonical order or repeat")]
    NonCanonicalMap,
    #[error("unsupported type head {0:#04x}")]
    Unsupported(u8),
    #[error("nesting deeper than {MAX_DEPTH}")]
    DepthExceeded,
    #[error("text string is not valid UTF-8")]
    InvalidUtf8,
    #[error("length larger than remaining input")]
    LengthOverflow,
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn byte(&mut self) -> Result<u8, DecodeError> {
        let b = *self.data.get(self.pos).ok_or(DecodeError::UnexpectedEof)?;
        self.pos += 1;
        Ok(b)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.data.len() - self.pos < n {
            return Err(DecodeError::LengthOverflow);
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn read_arg(&mut self, info: u8) -> Result<u64, DecodeError> {
        let arg = match info {
            0..=23 => return Ok(info as u64),
            24 => self.byte()? as u64,
            25 => u16::from_be_bytes(self.take(2)?.try_into().unwrap()) as u64,
            26 => u32::from_be_bytes(self.take(4)?.try_into().unwrap()) as u64,
            27 => u64::from_be_bytes(self.take(8)?.try_into().unwrap()),
            31 => return Err(DecodeError::IndefiniteLength),
            _ => return Err(DecodeError::Unsupported(info)),
        };
        let minimal = match info {
            24 => arg >= 24,
            25 => arg > u8::MAX as u64,
            26 => arg > u16::MAX as u64,
            _ => arg > u32::MAX as u64,
        };
        if !minimal {
            return Err(DecodeError::NonMinimalHead);
        }
        Ok(arg)
    }

    fn read_len(&mut self, info: u8) -> Result<usize, DecodeError> {
        let n = self.read_arg(info)?;
        if n > self.data.len() as u64 {
            return Err(DecodeError::LengthOverflow);
        }
        Ok(n as usize)
    }

    fn read_value(&mut self, depth: usize) -> Result<Value, DecodeError> {
        if depth > MAX_DEPTH {
            return Err(DecodeError::DepthExceeded);
        }
        let head = self.byte()?;
        let (major, info) = (head >> 5, head & 0x1f);
        match major {
            0 => Ok(Value::Uint(self.read_arg(info)?)),
            1 => Ok(Value::Nint(self.read_arg(info)?)),
            2 => {
                let n = self.read_len(info)?;
                Ok(Value::Bytes(self.take(n)?.to_vec()))
            }
            3 => {
                let n = self.read_len(info)?;
                let s = std::str::from_utf8(self.take(n)?)
                    .map_err(|_| DecodeError::InvalidUtf8)?;
                Ok(Value::Text(s.to_owned()))
            }
            4 => {
                let n = self.read_len(info)?;
                let mut items = Vec::with_capacity(n.min(64));
                for _ in 0..n {
                    items.push(self.read_value(depth + 1)?);
                }
                Ok(Value::Array(items))
            }
            5 => {
                let n = self.read_len(info)?;
                let mut entries = Vec::with_capacity(n.min(64));
                let mut prev_key: Option<Vec<u8>> = None;
                for _ in 0..n {
                    let k = self.read_value(depth + 1)?;
                    let kb = k.to_bytes();
                    if let Some(p) = &prev_key {
                        if kb <= *p {
                            return Err(DecodeError::NonCanonicalMap);
                        }
                    }
                    prev_key = Some(kb);
                    let v = self.read_value(depth + 1)?;
                    entries.push((k, v));
                }
                Ok(Value::Map(entries))
            }
            6 => {
                let tag = self.read_arg(info)?;
                Ok(Value::Tag(tag, Box::new(self.read_value(depth + 1)?)))
            }
            7 if head == 0xf6 => Ok(Value::Null),
            _ => Err(DecodeError::Unsupported(head)),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Uint(n) => write!(f, "{n}"),
            Value::Nint(n) => write!(f, "-{}", *n as u128 + 1),
            Value::Bytes(b) => {
                write!(f, "h'")?;
                for x in b {
                    write!(f, "{x:02x}")?;
                }
                write!(f, "'")
            }
            Value::Text(t) => write!(f, "{t:?}"),
            Value::Array(items) => {
                write!(f, "[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "]")
            }
            Value::Map(entries) => {
                write!(f, "{{")?;
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                write!(f, "}}")
            }
            Value::Tag(tag, inner) => write!(f, "{tag}({inner})"),
            Value::Null => write!(f, "null"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(v: &Value) -> String {
        hex::encode(v.to_bytes())
    }

    #[test]
    fn integer_heads_match_published_examples() {
        assert_eq!(enc(&Value::Uint(0)), "00");
        assert_eq!(enc(&Value::Uint(23)), "17");
        assert_eq!(enc(&Value::Uint(24)), "1818");
        assert_eq!(enc(&Value::Uint(100)), "1864");
        assert_eq!(enc(&Value::Uint(1000)), "1903e8");
        assert_eq!(enc(&Value::Uint(1000000)), "1a000f4240");
        assert_eq!(enc(&Value::int(-1)), "20");
        assert_eq!(enc(&Value::int(-10)), "29");
        assert_eq!(enc(&Value::int(-100)), "3863");
    }

    #[test]
    fn strings_arrays_maps_match_published_examples() {
        assert_eq!(enc(&Value::Bytes(vec![1, 2, 3, 4])), "4401020304");
        assert_eq!(enc(&Value::Text("IETF".into())), "6449455446");
        assert_eq!(
            enc(&Value::Array(vec![
                Value::Text("a".into()),
                Value::Map(vec![(Value::Text("b".into()), Value::Text("c".into()))]),
            ])),
            "826161a161626163"
        );
        assert_eq!(enc(&Value::Null), "f6");
    }

    #[test]
    fn map_keys_sort_bytewise_regardless_of_insertion_order() {
        // COSE label order: 1 < 2 < -1 < -2 once encoded (01, 02, 20, 21).
        let m = Value::Map(vec![
            (Value::int(-2), Value::Uint(4)),
            (Value::int(1), Value::Uint(1)),
            (Value::int(-1), Value::Uint(3)),
            (Value::int(2), Value::Uint(2)),
        ]);
        assert_eq!(enc(&m), "a40101020220032104");
        let back = Value::from_bytes(&m.to_bytes()).unwrap();
        assert_eq!(back.to_bytes(), m.to_bytes());
    }

    #[test]
    fn roundtrip_preserves_bytes() {
        let v = Value::Tag(
            18,
            Box::new(Value::Array(vec![
                Value::Bytes(vec![0xa2, 0x01]),
                Value::Map(vec![]),
                Value::Bytes(vec![]),
                Value::Uint(u64::MAX),
            ])),
        );
        let bytes = v.to_bytes();
        assert_eq!(Value::from_bytes(&bytes).unwrap(), v);
    }

    #[test]
    fn rejects_non_minimal_and_indefinite_forms() {
        // 24 encoded with a one-byte argument must round down to the head.
        assert_eq!(
            Value::from_bytes(&[0x18, 0x17]),
            Err(DecodeError::NonMinimalHead)
        );
        assert_eq!(
            Value::from_bytes(&[0x19, 0x00, 0xff]),
            Err(DecodeError::NonMinimalHead)
        );
        // Indefinite-length byte string.
        assert_eq!(
            Value::from_bytes(&[0x5f, 0x41, 0x01, 0xff]),
            Err(DecodeError::IndefiniteLength)
        );
    }

    #[test]
    fn rejects_unsorted_or_duplicate_map_keys() {
        // {2:0, 1:0}: wrong order.
        assert_eq!(
            Value::from_bytes(&[0xa2, 0x02, 0x00, 0x01, 0x00]),
            Err(DecodeError::NonCanonicalMap)
        );
        // {1:0, 1:0}: duplicate.
        assert_eq!(
            Value::from_bytes(&[0xa2, 0x01, 0x00, 0x01, 0x00]),
            Err(DecodeError::NonCanonicalMap)
        );
    }

    #[test]
    fn rejects_truncation_and_trailing_bytes() {
        assert_eq!(
            Value::from_bytes(&[0x44, 0x01, 0x02]),
            Err(DecodeError::LengthOverflow)
        );
        assert_eq!(
            Value::from_bytes(&[0x00, 0x00]),
            Err(DecodeError::TrailingBytes)
        );
        assert_eq!(Value::from_bytes(&[]), Err(DecodeError::UnexpectedEof));
    }

    #[test]
    fn rejects_floats_and_other_simple_values() {
        assert!(matches!(
            Value::from_bytes(&[0xf9, 0x3c, 0x00]),
            Err(DecodeError::Unsupported(_))
        ));
        assert!(matches!(
            Value::from_bytes(&[0xf5]),
            Err(DecodeError::Unsupported(_))
        ));
    }
}
