//! Byte and JSON codecs for keys and proofs.
//!
//! Binary layout is length-prefixed little-endian throughout: fixed fields
//! first, then each vector as a u64 count followed by uncompressed points.
//! A proof is always exactly 256 bytes (a, b, c concatenated), independent
//! of the statement proved.
//!
//! Verifying keys and proofs cross trust boundaries, so every parsed point
//! gets the full validation including the G2 subgroup check. Proving keys
//! are local artifacts whose corruption can only produce proofs that fail
//! verification, so their bulk vectors skip the (expensive) order check and
//! validate the curve equation only.

use super::groth16::{Proof, ProvingKey, VerifyingKey};
use super::SnarkError;
use crate::algebra::{CurveSpec, G1Point, G2Point, Point};
use serde::{Deserialize, Serialize};

pub const PROOF_BYTES: usize = 256;
const G1_BYTES: usize = 64;
const G2_BYTES: usize = 128;
const PK_MAGIC: &[u8; 4] = b"zkP1";
const VK_MAGIC: &[u8; 4] = b"zkV1";

fn encoding_err(what: &str) -> SnarkError {
    SnarkError::Encoding(what.to_string())
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf }
    }

    fn remaining(&self) -> usize {
        self.buf.len()
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], SnarkError> {
        if self.buf.len() < n {
            return Err(encoding_err("truncated input"));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    fn u64(&mut self) -> Result<u64, SnarkError> {
        let bytes = self.take(8)?;
        Ok(u64::from_le_bytes(bytes.try_into().expect("8 bytes")))
    }

    fn g1(&mut self) -> Result<G1Point, SnarkError> {
        G1Point::from_bytes(self.take(G1_BYTES)?).ok_or_else(|| encoding_err("invalid G1 point"))
    }

    fn g2(&mut self) -> Result<G2Point, SnarkError> {
        G2Point::from_bytes(self.take(G2_BYTES)?).ok_or_else(|| encoding_err("invalid G2 point"))
    }

    /// Curve-equation check only; used for bulk proving-key vectors.
    fn g2_local(&mut self) -> Result<G2Point, SnarkError> {
        point_on_curve_only(self.take(G2_BYTES)?).ok_or_else(|| encoding_err("invalid G2 point"))
    }

    fn digest(&mut self) -> Result<[u8; 32], SnarkError> {
        Ok(self.take(32)?.try_into().expect("32 bytes"))
    }

    fn vec_len(&mut self, elem_bytes: usize) -> Result<usize, SnarkError> {
        let n = self.u64()? as usize;
        if n > self.remaining() / elem_bytes {
            return Err(encoding_err("vector length exceeds buffer"));
        }
        Ok(n)
    }

    fn finish(self) -> Result<(), SnarkError> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(encoding_err("trailing bytes"))
        }
    }
}

fn point_on_curve_only<C: CurveSpec>(bytes: &[u8]) -> Option<Point<C>> {
    if bytes.len() != 2 * C::BASE_BYTES {
        return None;
    }
    if bytes.iter().all(|&b| b == 0) {
        return Some(Point::identity());
    }
    let x = C::base_from_bytes(&bytes[..C::BASE_BYTES])?;
    let y = C::base_from_bytes(&bytes[C::BASE_BYTES..])?;
    Point::from_xy(x, y)
}

fn write_vec_g1(out: &mut Vec<u8>, points: &[G1Point]) {
    out.extend_from_slice(&(points.len() as u64).to_le_bytes());
    for p in points {
        out.extend_from_slice(&p.to_bytes());
    }
}

impl Proof {
    /// Constant 256-byte encoding: a (64) || b (128) || c (64).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(PROOF_BYTES);
        out.extend_from_slice(&self.a.to_bytes());
        out.extend_from_slice(&self.b.to_bytes());
        out.extend_from_slice(&self.c.to_bytes());
        debug_assert_eq!(out.len(), PROOF_BYTES);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Proof, SnarkError> {
        if bytes.len() != PROOF_BYTES {
            return Err(encoding_err("proof must be exactly 256 bytes"));
        }
        let mut r = Reader::new(bytes);
        let proof = Proof {
            a: r.g1()?,
            b: r.g2()?,
            c: r.g1()?,
        };
        r.finish()?;
        Ok(proof)
    }

    /// One-line JSON with decimal coordinates, shaped like the verifier
    /// transaction payload: {"a":[x,y],"b":[[x0,x1],[y0,y1]],"c":[x,y]}.
    pub fn to_json(&self) -> String {
        let g1 = |p: &G1Point| [p.x.to_string(), p.y.to_string()];
        let json = ProofJson {
            a: g1(&self.a),
            b: [
                [self.b.x.c0.to_string(), self.b.x.c1.to_string()],
                [self.b.y.c0.to_string(), self.b.y.c1.to_string()],
            ],
            c: g1(&self.c),
        };
        serde_json::to_string(&json).expect("proof serializes")
    }

    pub fn from_json(text: &str) -> Result<Proof, SnarkError> {
        let json: ProofJson =
            serde_json::from_str(text).map_err(|e| SnarkError::Encoding(e.to_string()))?;
        // Route through the byte parser so JSON gets identical validation.
        let mut bytes = Vec::with_capacity(PROOF_BYTES);
        for dec in [
            &json.a[0], &json.a[1],
            &json.b[0][0], &json.b[0][1], &json.b[1][0], &json.b[1][1],
            &json.c[0], &json.c[1],
        ] {
            let fe = crate::algebra::Fq::from_decimal(dec)
                .ok_or_else(|| encoding_err("coordinate is not a field element"))?;
            bytes.extend_from_slice(&fe.to_bytes());
        }
        Proof::from_bytes(&bytes)
    }
}

#[derive(Serialize, Deserialize)]
struct ProofJson {
    a: [String; 2],
    b: [[String; 2]; 2],
    c: [String; 2],
}

impl VerifyingKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(VK_MAGIC);
        out.extend_from_slice(&self.digest);
        out.extend_from_slice(&self.alpha_g1.to_bytes());
        out.extend_from_slice(&self.beta_g2.to_bytes());
        out.extend_from_slice(&self.gamma_g2.to_bytes());
        out.extend_from_slice(&self.delta_g2.to_bytes());
        write_vec_g1(&mut out, &self.ic);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<VerifyingKey, SnarkError> {
        let mut r = Reader::new(bytes);
        if r.take(4)? != VK_MAGIC {
            return Err(encoding_err("not a verifying key"));
        }
        let digest = r.digest()?;
        let alpha_g1 = r.g1()?;
        let beta_g2 = r.g2()?;
        let gamma_g2 = r.g2()?;
        let delta_g2 = r.g2()?;
        let n = r.vec_len(G1_BYTES)?;
        let mut ic = Vec::with_capacity(n);
        for _ in 0..n {
            ic.push(r.g1()?);
        }
        r.finish()?;
        if ic.is_empty() {
            return Err(encoding_err("verifying key needs the constant term"));
        }
        Ok(VerifyingKey {
            digest,
            alpha_g1,
            beta_g2,
            gamma_g2,
            delta_g2,
            ic,
        })
    }
}

// Serde carries the verifying key as hex of the binary form so embedding it
// in JSON documents (ledger snapshots, receipts) reuses the validated codec.
impl serde::Serialize for VerifyingKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(self.to_bytes()))
    }
}

impl<'de> serde::Deserialize<'de> for VerifyingKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let bytes = hex::decode(&text).map_err(serde::de::Error::custom)?;
        VerifyingKey::from_bytes(&bytes).map_err(serde::de::Error::custom)
    }
}

impl ProvingKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(PK_MAGIC);
        out.extend_from_slice(&self.digest);
        out.extend_from_slice(&(self.num_public as u64).to_le_bytes());
        out.extend_from_slice(&(self.domain_size as u64).to_le_bytes());
        out.extend_from_slice(&self.alpha_g1.to_bytes());
        out.extend_from_slice(&self.beta_g1.to_bytes());
        out.extend_from_slice(&self.beta_g2.to_bytes());
        out.extend_from_slice(&self.delta_g1.to_bytes());
        out.extend_from_slice(&self.delta_g2.to_bytes());
        write_vec_g1(&mut out, &self.a_query);
        write_vec_g1(&mut out, &self.b_g1_query);
        out.extend_from_slice(&(self.b_g2_query.len() as u64).to_le_bytes());
        for p in &self.b_g2_query {
            out.extend_from_slice(&p.to_bytes());
        }
        write_vec_g1(&mut out, &self.h_query);
        write_vec_g1(&mut out, &self.l_query);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<ProvingKey, SnarkError> {
        let mut r = Reader::new(bytes);
        if r.take(4)? != PK_MAGIC {
            return Err(encoding_err("not a proving key"));
        }
        let digest = r.digest()?;
        let num_public = r.u64()? as usize;
        let domain_size = r.u64()? as usize;
        let alpha_g1 = r.g1()?;
        let beta_g1 = r.g1()?;
        let beta_g2 = r.g2()?;
        let delta_g1 = r.g1()?;
        let delta_g2 = r.g2()?;
        let read_g1_vec = |r: &mut Reader| -> Result<Vec<G1Point>, SnarkError> {
            let n = r.vec_len(G1_BYTES)?;
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(r.g1()?);
            }
            Ok(v)
        };
        let a_query = read_g1_vec(&mut r)?;
        let b_g1_query = read_g1_vec(&mut r)?;
        let n = r.vec_len(G2_BYTES)?;
        let mut b_g2_query = Vec::with_capacity(n);
        for _ in 0..n {
            b_g2_query.push(r.g2_local()?);
        }
        let h_query = read_g1_vec(&mut r)?;
        let l_query = read_g1_vec(&mut r)?;
        r.finish()?;
        Ok(ProvingKey {
            digest,
            num_public,
            domain_size,
            alpha_g1,
            beta_g1,
            beta_g2,
            delta_g1,
            delta_g2,
            a_query,
            b_g1_query,
            b_g2_query,
            h_query,
            l_query,
        })
    }
}
