//! Little-endian binary encoding and the `LEXIS1` container.
//!
//! Layout: magic `LEXIS1`, format version, seed, `t`, `alpha`, `beta`, `delta`,
//! then tagged sections `[tag: 4 bytes][len: u64][payload]` until end of file.

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 6] = b"LEXIS1";
pub const VERSION: u32 = 1;

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }

    pub fn u32s(&mut self, v: &[u32]) {
        self.u64(v.len() as u64);
        for &x in v {
            self.u32(x);
        }
    }

    pub fn u64s(&mut self, v: &[u64]) {
        self.u64(v.len() as u64);
        for &x in v {
            self.u64(x);
        }
    }

    pub fn u8s(&mut self, v: &[u8]) {
        self.u64(v.len() as u64);
        self.bytes(v);
    }

    pub fn section(&mut self, tag: &[u8; 4], body: impl FnOnce(&mut Writer)) {
        let mut inner = Writer::new();
        body(&mut inner);
        self.bytes(tag);
        self.u64(inner.buf.len() as u64);
        self.bytes(&inner.buf);
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn is_done(&self) -> bool {
        self.pos == self.buf.len()
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Format("unexpected end of data".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }

    fn count(&mut self, elem: usize) -> Result<usize> {
        let n = self.u64()? as usize;
        if n.checked_mul(elem).is_none_or(|b| b > self.buf.len() - self.pos) {
            return Err(Error::Format("array length past end of data".into()));
        }
        Ok(n)
    }

    pub fn u32s(&mut self) -> Result<Vec<u32>> {
        let n = self.count(4)?;
        (0..n).map(|_| self.u32()).collect()
    }

    pub fn u64s(&mut self) -> Result<Vec<u64>> {
        let n = self.count(8)?;
        (0..n).map(|_| self.u64()).collect()
    }

    pub fn u8s(&mut self) -> Result<Vec<u8>> {
        let n = self.count(1)?;
        Ok(self.take(n)?.to_vec())
    }

    /// Next section as `(tag, payload reader)`.
    pub fn section(&mut self) -> Result<([u8; 4], Reader<'a>)> {
        let tag: [u8; 4] = self.take(4)?.try_into().unwrap();
        let len = self.u64()? as usize;
        Ok((tag, Reader::new(self.take(len)?)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Header {
    pub version: u32,
    pub seed: u64,
    pub t: u64,
    pub alpha: f64,
    pub beta: u32,
    pub delta: u32,
}

impl Header {
    pub fn encode(&self, w: &mut Writer) {
        w.bytes(MAGIC);
        w.u32(self.version);
        w.u64(self.seed);
        w.u64(self.t);
        w.f64(self.alpha);
        w.u32(self.beta);
        w.u32(self.delta);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        if r.take(6)? != MAGIC {
            return Err(Error::Format("missing LEXIS1 magic".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        Ok(Self {
            version,
            seed: r.u64()?,
            t: r.u64()?,
            alpha: r.f64()?,
            beta: r.u32()?,
            delta: r.u32()?,
        })
    }
}
