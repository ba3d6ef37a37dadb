//! C ABI over `fsk-core`.
//!
//! Objects are opaque handles created by `*_new` / `fsk_enroll` /
//! `fsk_sketch_deserialize` and released with the matching `*_free`.
//! Every fallible call returns an `FskStatus`; on failure the detail is
//! available from `fsk_last_error_message` on the same thread.
//!
//! Bit buffers are packed MSB-first: bit `i` is `(buf[i / 8] >> (7 - i % 8)) & 1`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use fsk_core::bits::{BitVector, TernaryVector, Trit};
use fsk_core::capacity::{binary_entropy, entropy_inverse, theta, CapacityQuery};
use fsk_core::minsum::{min_sum_decode, DecodeStatus};
use fsk_core::sketch::{enroll_with, verify, EnrollOptions};
use fsk_core::Error;

/// Result codes. `FSK_STATUS_REJECT` is returned by a verification that
/// completed but did not accept.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FskStatus {
    Ok = 0,
    Reject = 1,
    NullPointer = 2,
    InvalidArgument = 3,
    LengthMismatch = 4,
    Malformed = 5,
    UnknownDigest = 6,
    ExhaustiveBound = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Decoder outcome, mirroring the library's decode status.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FskDecodeStatus {
    Codeword = 0,
    Undecided = 1,
    MaxIterations = 2,
}

/// Symbol value marking an erased coordinate in decoder input.
pub const FSK_ERASED: u8 = 2;

pub struct FskProductCode(fsk_core::ProductCode);
pub struct FskTemplate(fsk_core::Template);
pub struct FskSketch(fsk_core::Sketch);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FskStatus {
    match e {
        Error::LengthMismatch { .. } => FskStatus::LengthMismatch,
        Error::ExhaustiveBound { .. } => FskStatus::ExhaustiveBound,
        Error::UnknownDigest(_) => FskStatus::UnknownDigest,
        Error::Format(_) => FskStatus::Malformed,
        Error::NoOverlap | Error::InvalidParameter(_) | Error::Io(_) => FskStatus::InvalidArgument,
    }
}

fn fail(status: FskStatus, msg: &str) -> FskStatus {
    set_last_error(msg);
    status
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<FskStatus, FskStatus>) -> FskStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == FskStatus::Ok {
                set_last_error("");
            }
            s
        }
        Ok(Err(s)) => s,
        Err(_) => fail(FskStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, FskStatus>;
}

impl<T> OrStatus<T> for fsk_core::Result<T> {
    fn or_status(self) -> Result<T, FskStatus> {
        self.map_err(|e| fail(status_of(&e), &e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, FskStatus> {
    p.as_ref()
        .ok_or_else(|| fail(FskStatus::NullPointer, &format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, FskStatus> {
    p.as_mut()
        .ok_or_else(|| fail(FskStatus::NullPointer, &format!("{what} is null")))
}

unsafe fn bytes<'a>(p: *const u8, len: usize, what: &str) -> Result<&'a [u8], FskStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(FskStatus::NullPointer, &format!("{what} is null")));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn fsk_status_message(status: FskStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        FskStatus::Ok => b"ok\0",
        FskStatus::Reject => b"rejected\0",
        FskStatus::NullPointer => b"null pointer argument\0",
        FskStatus::InvalidArgument => b"invalid argument\0",
        FskStatus::LengthMismatch => b"length mismatch\0",
        FskStatus::Malformed => b"malformed input\0",
        FskStatus::UnknownDigest => b"unknown digest algorithm\0",
        FskStatus::ExhaustiveBound => b"code order exceeds the exhaustive bound\0",
        FskStatus::BufferTooSmall => b"buffer too small\0",
        FskStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Detail of the last failure on this thread, or an empty string. Valid
/// until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn fsk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// RM(1,m1) rows by RM(1,m2) columns.
#[no_mangle]
pub unsafe extern "C" fn fsk_product_code_new(m1: u32, m2: u32, out_code: *mut *mut FskProductCode) -> FskStatus {
    guard(|| {
        let slot = out(out_code, "out_code")?;
        let pc = fsk_core::ProductCode::new(m1, m2).or_status()?;
        *slot = Box::into_raw(Box::new(FskProductCode(pc)));
        Ok(FskStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn fsk_product_code_free(code: *mut FskProductCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Block length N, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fsk_product_code_length(code: *const FskProductCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.length())
}

/// Dimension k, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fsk_product_code_dimension(code: *const FskProductCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.dimension())
}

/// A template of `bits` bits. A null `mask` means every bit is reliable.
#[no_mangle]
pub unsafe extern "C" fn fsk_template_new(
    code: *const u8,
    mask: *const u8,
    bits: usize,
    out_template: *mut *mut FskTemplate,
) -> FskStatus {
    guard(|| {
        let slot = out(out_template, "out_template")?;
        let nbytes = bits.div_ceil(8);
        let c = BitVector::from_bytes_msb(bytes(code, nbytes, "code")?, bits).or_status()?;
        let m = if mask.is_null() {
            BitVector::ones(bits)
        } else {
            BitVector::from_bytes_msb(bytes(mask, nbytes, "mask")?, bits).or_status()?
        };
        let t = fsk_core::Template::new(c, m).or_status()?;
        *slot = Box::into_raw(Box::new(FskTemplate(t)));
        Ok(FskStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn fsk_template_free(template: *mut FskTemplate) {
    if !template.is_null() {
        drop(Box::from_raw(template));
    }
}

/// Enrolls `template`; all randomness comes from `seed`.
#[no_mangle]
pub unsafe extern "C" fn fsk_enroll(
    template: *const FskTemplate,
    code: *const FskProductCode,
    seed: u64,
    interleave: bool,
    out_sketch: *mut *mut FskSketch,
) -> FskStatus {
    guard(|| {
        let t = deref(template, "template")?;
        let pc = deref(code, "code")?;
        let slot = out(out_sketch, "out_sketch")?;
        let opts = EnrollOptions {
            interleave,
            ..EnrollOptions::default()
        };
        let s = enroll_with(&t.0, &pc.0, seed, &opts).or_status()?;
        *slot = Box::into_raw(Box::new(FskSketch(s)));
        Ok(FskStatus::Ok)
    })
}

/// Verifies `probe` over `rotation_count` shifts. Returns `FSK_STATUS_OK`
/// on accept and `FSK_STATUS_REJECT` on reject. The optional outputs
/// receive the accepting rotation and the iterations of the reported
/// attempt.
#[no_mangle]
pub unsafe extern "C" fn fsk_verify(
    sketch: *const FskSketch,
    probe: *const FskTemplate,
    code: *const FskProductCode,
    rotations: *const i64,
    rotation_count: usize,
    max_iterations: usize,
    out_rotation: *mut i64,
    out_iterations: *mut usize,
) -> FskStatus {
    guard(|| {
        let s = deref(sketch, "sketch")?;
        let p = deref(probe, "probe")?;
        let pc = deref(code, "code")?;
        if rotations.is_null() {
            return Err(fail(FskStatus::NullPointer, "rotations is null"));
        }
        let rots = slice::from_raw_parts(rotations, rotation_count);
        let outcome = verify(&s.0, &p.0, &pc.0, rots, max_iterations).or_status()?;
        if let Some(a) = outcome.reported() {
            if let Some(it) = out_iterations.as_mut() {
                *it = a.iterations;
            }
        }
        if let (Some(r), Some(slot)) = (outcome.best_rotation, out_rotation.as_mut()) {
            *slot = r;
        }
        Ok(if outcome.accepted {
            FskStatus::Ok
        } else {
            FskStatus::Reject
        })
    })
}

/// Bytes needed by `fsk_sketch_serialize`, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fsk_sketch_serialized_len(sketch: *const FskSketch) -> usize {
    sketch.as_ref().map_or(0, |s| s.0.to_bytes().len())
}

/// Writes the sketch file format into `buf`. `out_written` always receives
/// the required size, also when the buffer is too small.
#[no_mangle]
pub unsafe extern "C" fn fsk_sketch_serialize(
    sketch: *const FskSketch,
    buf: *mut u8,
    capacity: usize,
    out_written: *mut usize,
) -> FskStatus {
    guard(|| {
        let s = deref(sketch, "sketch")?;
        let written = out(out_written, "out_written")?;
        let encoded = s.0.to_bytes();
        *written = encoded.len();
        if capacity < encoded.len() {
            return Err(fail(
                FskStatus::BufferTooSmall,
                &format!("need {} bytes, have {capacity}", encoded.len()),
            ));
        }
        if buf.is_null() {
            return Err(fail(FskStatus::NullPointer, "buf is null"));
        }
        ptr::copy_nonoverlapping(encoded.as_ptr(), buf, encoded.len());
        Ok(FskStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn fsk_sketch_deserialize(
    buf: *const u8,
    len: usize,
    out_sketch: *mut *mut FskSketch,
) -> FskStatus {
    guard(|| {
        let slot = out(out_sketch, "out_sketch")?;
        let s = fsk_core::Sketch::from_bytes(bytes(buf, len, "buf")?).or_status()?;
        *slot = Box::into_raw(Box::new(FskSketch(s)));
        Ok(FskStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn fsk_sketch_free(sketch: *mut FskSketch) {
    if !sketch.is_null() {
        drop(Box::from_raw(sketch));
    }
}

/// Code orders stored in the sketch.
#[no_mangle]
pub unsafe extern "C" fn fsk_sketch_code_params(
    sketch: *const FskSketch,
    out_m1: *mut u32,
    out_m2: *mut u32,
) -> FskStatus {
    guard(|| {
        let s = deref(sketch, "sketch")?;
        let (m1, m2) = s.0.code_params;
        *out(out_m1, "out_m1")? = m1;
        *out(out_m2, "out_m2")? = m2;
        Ok(FskStatus::Ok)
    })
}

/// Min-sum decodes `len` symbols (0, 1 or `FSK_ERASED`, row-major). On
/// success `out_word` receives `len` bytes of 0, 1 or `FSK_ERASED`.
#[no_mangle]
pub unsafe extern "C" fn fsk_decode(
    code: *const FskProductCode,
    symbols: *const u8,
    len: usize,
    max_iterations: usize,
    out_word: *mut u8,
    out_status: *mut FskDecodeStatus,
    out_iterations: *mut usize,
) -> FskStatus {
    guard(|| {
        let pc = deref(code, "code")?;
        let input = bytes(symbols, len, "symbols")?;
        let trits = input
            .iter()
            .map(|&b| match b {
                0 => Ok(Trit::Zero),
                1 => Ok(Trit::One),
                FSK_ERASED => Ok(Trit::Erased),
                other => Err(fail(FskStatus::InvalidArgument, &format!("symbol value {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let r = min_sum_decode(&TernaryVector::from_trits(trits), &pc.0, max_iterations).or_status()?;
        let status = out(out_status, "out_status")?;
        let iterations = out(out_iterations, "out_iterations")?;
        if out_word.is_null() && len > 0 {
            return Err(fail(FskStatus::NullPointer, "out_word is null"));
        }
        let word = slice::from_raw_parts_mut(out_word, len);
        for (dst, t) in word.iter_mut().zip(r.word.symbols()) {
            *dst = match t {
                Trit::Zero => 0,
                Trit::One => 1,
                Trit::Erased => FSK_ERASED,
            };
        }
        *status = match r.status {
            DecodeStatus::Codeword => FskDecodeStatus::Codeword,
            DecodeStatus::Undecided => FskDecodeStatus::Undecided,
            DecodeStatus::MaxIterations => FskDecodeStatus::MaxIterations,
        };
        *iterations = r.iterations_used;
        Ok(FskStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn fsk_binary_entropy(x: f64, out_value: *mut f64) -> FskStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = binary_entropy(x).or_status()?;
        Ok(FskStatus::Ok)
    })
}

/// The root of `h(x) = y` in [0, 1/2].
#[no_mangle]
pub unsafe extern "C" fn fsk_entropy_inverse(y: f64, out_value: *mut f64) -> FskStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = entropy_inverse(y).or_status()?;
        Ok(FskStatus::Ok)
    })
}

/// Largest decodable error fraction on unerased bits for an [n, k] code
/// with `w_e` erasures. `out_rate_saturated` (optional) is set when
/// k > n - w_e.
#[no_mangle]
pub unsafe extern "C" fn fsk_theta(
    n: u64,
    k: u64,
    w_e: u64,
    out_value: *mut f64,
    out_rate_saturated: *mut bool,
) -> FskStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        let q = CapacityQuery::new(n, k).or_status()?;
        let t = theta(&q, w_e).or_status()?;
        *slot = t.value;
        if let Some(s) = out_rate_saturated.as_mut() {
            *s = t.rate_saturated;
        }
        Ok(FskStatus::Ok)
    })
}
