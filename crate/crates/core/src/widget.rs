//! Runtime value semantics of the widget kinds: quantization, checkbox
//! encoding, typed parameter writes, button pulses and image normalization.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::image::ImageBuffer;
use crate::model::{NumericType, ParamKind, ParamRef, ParamValue, ParamWidgetConfig, ParameterWidgetDef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WidgetError {
    #[error("encoding length: {bits} bits for {items} items")]
    EncodingLength { bits: usize, items: usize },
    #[error("bad checkbox digit `{0}`")]
    BadDigit(char),
    #[error("type conversion: `{value}` is not a valid {kind}")]
    TypeConversion { value: String, kind: &'static str },
    #[error("`{0}` is not one of the widget's items")]
    NotAnItem(String),
    #[error("no dictslider item `{0}`")]
    UnknownKey(String),
    #[error("value does not fit a {0} widget")]
    WrongValue(&'static str),
    #[error("bad range: hi must exceed lo")]
    BadRange,
}

/// Snaps `raw` to the nearest `min + k*increment` inside `[min, max]`.
/// Ties round toward +inf; NaN maps to `min`.
pub fn slider_quantize(raw: f64, min: f64, max: f64, increment: f64) -> f64 {
    if raw.is_nan() {
        return min;
    }
    let k_max = libm::floor((max - min) / increment + 1e-9);
    let k = libm::floor((raw - min) / increment + 0.5).clamp(0.0, k_max);
    (min + k * increment).min(max)
}

/// Bit `i` is `'1'` iff `items[i]` is selected.
pub fn checkbox_encode<S: AsRef<str>>(items: &[S], selected: &BTreeSet<String>) -> String {
    items
        .iter()
        .map(|i| if selected.contains(i.as_ref()) { '1' } else { '0' })
        .collect()
}

pub fn checkbox_decode<S: AsRef<str>>(bits: &str, items: &[S]) -> Result<BTreeSet<String>, WidgetError> {
    let n = bits.chars().count();
    if n != items.len() {
        return Err(WidgetError::EncodingLength {
            bits: n,
            items: items.len(),
        });
    }
    let mut out = BTreeSet::new();
    for (c, item) in bits.chars().zip(items) {
        match c {
            '1' => {
                out.insert(item.as_ref().to_string());
            }
            '0' => {}
            other => return Err(WidgetError::BadDigit(other)),
        }
    }
    Ok(out)
}

/// A value coming from a UI control.
#[derive(Debug, Clone, PartialEq)]
pub enum UiValue {
    Number(f64),
    Text(String),
    /// Dictslider: value for the item with this key.
    Keyed { key: String, value: f64 },
    Click,
}

/// Which part of the target field a write replaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WriteSlot {
    Whole,
    Key(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamWrite {
    pub target: ParamRef,
    pub slot: WriteSlot,
    pub value: ParamValue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Applied {
    Write(ParamWrite),
    /// Button click; latched until the next step boundary.
    Pulse(ParamRef),
}

fn typed(v: f64, ty: NumericType) -> ParamValue {
    ty.number(v).into()
}

fn convert(text: &str, kind: ParamKind) -> Result<ParamValue, WidgetError> {
    let fail = |k: &'static str| WidgetError::TypeConversion {
        value: text.to_string(),
        kind: k,
    };
    Ok(match kind {
        ParamKind::Int => ParamValue::Int(text.trim().parse().map_err(|_| fail("int"))?),
        ParamKind::Float => {
            let v: f64 = text.trim().parse().map_err(|_| fail("float"))?;
            if !v.is_finite() {
                return Err(fail("float"));
            }
            ParamValue::Real(v)
        }
        _ => ParamValue::Text(text.to_string()),
    })
}

/// Turns a UI value into the typed parameter write for `def`. Errors mean
/// the write is suppressed.
pub fn apply_param_widget(def: &ParameterWidgetDef, ui: &UiValue) -> Result<Applied, WidgetError> {
    let whole = |value| {
        Ok(Applied::Write(ParamWrite {
            target: def.target.clone(),
            slot: WriteSlot::Whole,
            value,
        }))
    };
    match (&def.config, ui) {
        (ParamWidgetConfig::Slider(s), UiValue::Number(raw)) => {
            let r = &s.range;
            whole(typed(slider_quantize(*raw, r.min, r.max, r.increment), s.value_type))
        }
        (ParamWidgetConfig::DictSlider(d), UiValue::Keyed { key, value }) => {
            let item = d.item(key).ok_or_else(|| WidgetError::UnknownKey(key.clone()))?;
            let r = &item.range;
            let q = slider_quantize(*value, r.min, r.max, r.increment);
            Ok(Applied::Write(ParamWrite {
                target: def.target.clone(),
                slot: WriteSlot::Key(key.clone()),
                value: typed(q, item.value_type),
            }))
        }
        (ParamWidgetConfig::TextIn(_), UiValue::Text(t)) => whole(ParamValue::Text(t.clone())),
        (ParamWidgetConfig::ListSel(l), UiValue::Text(t)) => {
            if !l.items.iter().any(|i| i == t) {
                return Err(WidgetError::NotAnItem(t.clone()));
            }
            whole(convert(t, l.value_type)?)
        }
        (ParamWidgetConfig::RadioButton { items }, UiValue::Text(t)) => {
            if !items.iter().any(|i| i == t) {
                return Err(WidgetError::NotAnItem(t.clone()));
            }
            whole(ParamValue::Text(t.clone()))
        }
        (ParamWidgetConfig::Checkbox { items }, UiValue::Text(bits)) => {
            checkbox_decode(bits, items)?;
            whole(ParamValue::Text(bits.clone()))
        }
        (ParamWidgetConfig::Button(_), UiValue::Click) => Ok(Applied::Pulse(def.target.clone())),
        (cfg, _) => Err(WidgetError::WrongValue(cfg.kind().keyword())),
    }
}

/// Button state: clicks since the last step collapse into one `"1"`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ButtonLatch {
    clicked: bool,
}

impl ButtonLatch {
    pub fn click(&mut self) {
        self.clicked = true;
    }

    pub fn is_pending(&self) -> bool {
        self.clicked
    }

    /// Value the bound parameter holds for the coming step.
    pub fn read_and_reset(&mut self) -> &'static str {
        if core::mem::take(&mut self.clicked) {
            "1"
        } else {
            "0"
        }
    }
}

/// Maps `v` to `floor(255*clamp((v-lo)/(hi-lo), 0, 1) + 0.5)`. NaN maps to 0.
pub fn normalize_sample(v: f64, lo: f64, hi: f64) -> u8 {
    let t = (v - lo) / (hi - lo);
    if t.is_nan() {
        return 0;
    }
    libm::floor(255.0 * t.clamp(0.0, 1.0) + 0.5) as u8
}

/// 8-bit display copy of `buf` with the same shape.
pub fn image_normalize<T>(buf: &ImageBuffer<T>, lo: f64, hi: f64) -> Result<ImageBuffer<u8>, WidgetError>
where
    T: Copy + Default + Into<f64>,
{
    if !(hi > lo) {
        return Err(WidgetError::BadRange);
    }
    Ok(buf.map(|v| normalize_sample(v.into(), lo, hi)))
}

/// Selected item labels, in item order.
pub fn selected_items<S: AsRef<str>>(bits: &str, items: &[S]) -> Result<Vec<String>, WidgetError> {
    let set = checkbox_decode(bits, items)?;
    Ok(items
        .iter()
        .filter(|i| set.contains(i.as_ref()))
        .map(|i| i.as_ref().to_string())
        .collect())
}
