//! C ABI over the `nswcat` lexer, feature extractor and trained models.
//!
//! Every fallible function returns an [`NswStatus`]; on failure the
//! message is available from [`nsw_last_error`] on the same thread.
//! Handles are opaque and must be released with their `_free` function.
//! Buffers are caller-owned: pass a capacity, receive the needed length
//! in `out_len`, and get `NSW_STATUS_BUFFER_TOO_SMALL` (with nothing
//! written) when the capacity is short. A null buffer with capacity 0 is
//! a size query.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use nswcat::classifiers::{deserialize_model, load_model, Model};
use nswcat::features::{frequency_vector, represent, Representation};
use nswcat::lexer::NswLexer;
use nswcat::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NswStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    /// Malformed resource file, model bytes or argument value.
    Data = 4,
    WidthMismatch = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

pub const NSW_REP_FREQ: u32 = 0;
pub const NSW_REP_STAT: u32 = 1;
pub const NSW_REP_UNION: u32 = 2;

/// One detected NSW: byte range in the input and taxonomy leaf index.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NswSpan {
    pub start: usize,
    pub end: usize,
    pub type_id: u32,
}

pub struct NswLexerHandle {
    lexer: NswLexer,
    type_names: Vec<CString>,
}

pub struct NswModelHandle {
    model: Model,
    class_names: Vec<CString>,
    kind: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Fail(NswStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => NswStatus::Io,
            Error::WidthMismatch { .. } => NswStatus::WidthMismatch,
            _ => NswStatus::Data,
        };
        set_error(e.to_string());
        Fail(status)
    }
}

fn fail(status: NswStatus, msg: impl Into<String>) -> Fail {
    set_error(msg);
    Fail(status)
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NswStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NswStatus::Ok
        }
        Ok(Err(Fail(status))) => status,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            NswStatus::Panic
        }
    }
}

unsafe fn text_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(NswStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(NswStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn opt_path<'a>(p: *const c_char, what: &str) -> Result<Option<&'a Path>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        text_arg(p, what).map(|s| Some(Path::new(s)))
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(NswStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| fail(NswStatus::NullPointer, format!("{what} is null")))
}

/// Copies `items` into a caller buffer of `cap` elements.
unsafe fn fill<T: Copy>(items: &[T], out: *mut T, cap: usize, out_len: *mut usize) -> Result<(), Fail> {
    *out_ptr(out_len, "out_len")? = items.len();
    if items.len() > cap {
        return Err(fail(
            NswStatus::BufferTooSmall,
            format!("{} elements needed, capacity {cap}", items.len()),
        ));
    }
    if !items.is_empty() {
        if out.is_null() {
            return Err(fail(NswStatus::NullPointer, "output buffer is null"));
        }
        ptr::copy_nonoverlapping(items.as_ptr(), out, items.len());
    }
    Ok(())
}

fn representation(rep: u32) -> Result<Representation, Fail> {
    match rep {
        NSW_REP_FREQ => Ok(Representation::Freq),
        NSW_REP_STAT => Ok(Representation::Stat),
        NSW_REP_UNION => Ok(Representation::Union),
        _ => Err(fail(NswStatus::Data, format!("unknown representation {rep}"))),
    }
}

fn c_string(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).unwrap_or_default()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nsw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn nsw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Feature count of a representation, or 0 for an unknown one.
#[no_mangle]
pub extern "C" fn nsw_representation_width(rep: u32) -> usize {
    match rep {
        NSW_REP_FREQ => Representation::Freq.width(),
        NSW_REP_STAT => Representation::Stat.width(),
        NSW_REP_UNION => Representation::Union.width(),
        _ => 0,
    }
}

fn lexer_handle(lexer: NswLexer) -> *mut NswLexerHandle {
    let type_names = lexer.taxonomy.types().iter().map(|t| c_string(&t.name)).collect();
    Box::into_raw(Box::new(NswLexerHandle { lexer, type_names }))
}

/// Lexer with the shipped taxonomy, lexicon and rules.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_new_default(out: *mut *mut NswLexerHandle) -> NswStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = lexer_handle(NswLexer::builtin());
        Ok(())
    })
}

/// Lexer from resource files; a null path keeps the shipped component.
///
/// # Safety
/// Non-null paths must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_new_from_files(
    taxonomy: *const c_char,
    lexicon: *const c_char,
    rules: *const c_char,
    out: *mut *mut NswLexerHandle,
) -> NswStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let lexer = NswLexer::from_paths(
            opt_path(taxonomy, "taxonomy path")?,
            opt_path(lexicon, "lexicon path")?,
            opt_path(rules, "rules path")?,
        )?;
        *out = lexer_handle(lexer);
        Ok(())
    })
}

/// # Safety
/// `lexer` must come from a constructor above and not be used again.
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_free(lexer: *mut NswLexerHandle) {
    if !lexer.is_null() {
        drop(Box::from_raw(lexer));
    }
}

/// Number of taxonomy leaves.
///
/// # Safety
/// `lexer` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_type_count(lexer: *const NswLexerHandle) -> usize {
    lexer.as_ref().map_or(0, |h| h.type_names.len())
}

/// Name of leaf `type_id`, owned by the lexer; null when out of range.
///
/// # Safety
/// `lexer` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_type_name(lexer: *const NswLexerHandle, type_id: u32) -> *const c_char {
    lexer
        .as_ref()
        .and_then(|h| h.type_names.get(type_id as usize))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// # Safety
/// `lexer` live, `text` NUL-terminated, `out_count` valid.
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_count_tokens(
    lexer: *const NswLexerHandle,
    text: *const c_char,
    out_count: *mut usize,
) -> NswStatus {
    guard(|| {
        let h = handle(lexer, "lexer")?;
        let text = text_arg(text, "text")?;
        *out_ptr(out_count, "out_count")? = h.lexer.tokenize(text).len();
        Ok(())
    })
}

/// Writes every NSW in `text` to `out`, in document order.
///
/// # Safety
/// `lexer` live, `text` NUL-terminated, `out` valid for `cap` spans,
/// `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_extract(
    lexer: *const NswLexerHandle,
    text: *const c_char,
    out: *mut NswSpan,
    cap: usize,
    out_len: *mut usize,
) -> NswStatus {
    guard(|| {
        let h = handle(lexer, "lexer")?;
        let text = text_arg(text, "text")?;
        let spans: Vec<NswSpan> = h
            .lexer
            .extract("", text)
            .into_iter()
            .map(|o| NswSpan {
                start: o.start,
                end: o.end,
                type_id: o.nsw_type.0 as u32,
            })
            .collect();
        fill(&spans, out, cap, out_len)
    })
}

/// Feature vector of `text` as one document in representation `rep`.
///
/// # Safety
/// `lexer` live, `text` NUL-terminated, `out` valid for `cap` values,
/// `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn nsw_lexer_features(
    lexer: *const NswLexerHandle,
    text: *const c_char,
    rep: u32,
    out: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> NswStatus {
    guard(|| {
        let h = handle(lexer, "lexer")?;
        let text = text_arg(text, "text")?;
        let rep = representation(rep)?;
        let tokens = h.lexer.tokenize(text);
        let occ = h.lexer.extract_tokens("", text, &tokens);
        let freq = frequency_vector("", &occ, tokens.len(), &h.lexer.taxonomy);
        fill(&represent(&freq, rep), out, cap, out_len)
    })
}

fn model_handle(model: Model) -> *mut NswModelHandle {
    let class_names = model.class_names.iter().map(|s| c_string(s)).collect();
    let kind = c_string(model.kind().as_str());
    Box::into_raw(Box::new(NswModelHandle {
        model,
        class_names,
        kind,
    }))
}

/// Loads a model file written by `nswcat train`.
///
/// # Safety
/// `path` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn nsw_model_load(path: *const c_char, out: *mut *mut NswModelHandle) -> NswStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = text_arg(path, "path")?;
        *out = model_handle(load_model(path)?);
        Ok(())
    })
}

/// Decodes a model from the bytes of a model file.
///
/// # Safety
/// `bytes` valid for `len` bytes, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn nsw_model_from_bytes(
    bytes: *const u8,
    len: usize,
    out: *mut *mut NswModelHandle,
) -> NswStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if bytes.is_null() {
            return Err(fail(NswStatus::NullPointer, "bytes is null"));
        }
        let data = std::slice::from_raw_parts(bytes, len);
        *out = model_handle(deserialize_model(data)?);
        Ok(())
    })
}

/// # Safety
/// `model` must come from a loader above and not be used again.
#[no_mangle]
pub unsafe extern "C" fn nsw_model_free(model: *mut NswModelHandle) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// `nb`, `knn`, `tree` or `forest`; null for a null handle.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nsw_model_kind(model: *const NswModelHandle) -> *const c_char {
    model.as_ref().map_or(ptr::null(), |h| h.kind.as_ptr())
}

/// # Safety
/// `model` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn nsw_model_feature_width(model: *const NswModelHandle) -> usize {
    model.as_ref().map_or(0, |h| h.model.feature_width)
}

/// # Safety
/// `model` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn nsw_model_class_count(model: *const NswModelHandle) -> usize {
    model.as_ref().map_or(0, |h| h.class_names.len())
}

/// Name of class `index`, owned by the model; null when out of range.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nsw_model_class_name(model: *const NswModelHandle, index: usize) -> *const c_char {
    model
        .as_ref()
        .and_then(|h| h.class_names.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// Predicts the class index of one feature vector.
///
/// # Safety
/// `model` live, `features` valid for `len` values, `out_class` valid.
#[no_mangle]
pub unsafe extern "C" fn nsw_model_predict(
    model: *const NswModelHandle,
    features: *const f64,
    len: usize,
    out_class: *mut usize,
) -> NswStatus {
    guard(|| {
        let h = handle(model, "model")?;
        let out_class = out_ptr(out_class, "out_class")?;
        if features.is_null() && len > 0 {
            return Err(fail(NswStatus::NullPointer, "features is null"));
        }
        let x: &[f64] = if len == 0 { &[] } else { std::slice::from_raw_parts(features, len) };
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(fail(NswStatus::Data, format!("feature {i} is not finite")));
        }
        *out_class = h.model.predict_index(x)?;
        Ok(())
    })
}
