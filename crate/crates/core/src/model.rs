//! Widget, parameter and data-array definitions for one simulation context.
//!
//! These records mirror the six persistent tables (`tb_simulation`,
//! `tb_parameter`, `tb_dataarray`, `tb_parameterwidget`, `tb_datawidget`,
//! `tb_commentwidget`) and are shared by the directive parser, the store,
//! the engine and the wire protocol.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Name of the context every fresh store starts with.
pub const DEFAULT_CONTEXT: &str = "N.N.";

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SimulationContext {
    pub name: String,
    pub app_name: String,
}

impl SimulationContext {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            app_name: String::new(),
        }
    }
}

impl Default for SimulationContext {
    fn default() -> Self {
        Self::new(DEFAULT_CONTEXT)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ParamKind {
    Int,
    Float,
    String,
    KeyedGroup,
}

impl ParamKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamKind::Int => "int",
            ParamKind::Float => "float",
            ParamKind::String => "string",
            ParamKind::KeyedGroup => "keyed_group",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "int" => ParamKind::Int,
            "float" => ParamKind::Float,
            "string" => ParamKind::String,
            "keyed_group" => ParamKind::KeyedGroup,
            _ => return None,
        })
    }
}

/// Base type of a numeric widget (sliders, dictslider items, images).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NumericType {
    Int,
    Float,
}

impl NumericType {
    pub fn as_str(self) -> &'static str {
        match self {
            NumericType::Int => "int",
            NumericType::Float => "float",
        }
    }

    pub fn param_kind(self) -> ParamKind {
        match self {
            NumericType::Int => ParamKind::Int,
            NumericType::Float => ParamKind::Float,
        }
    }

    /// Casts a real to this type; ints round half-up.
    pub fn number(self, v: f64) -> Number {
        match self {
            NumericType::Int => Number::Int(libm::floor(v + 0.5) as i64),
            NumericType::Float => Number::Real(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Number {
    Int(i64),
    Real(f64),
}

impl Number {
    pub fn as_f64(self) -> f64 {
        match self {
            Number::Int(i) => i as f64,
            Number::Real(r) => r,
        }
    }

    pub fn numeric_type(self) -> NumericType {
        match self {
            Number::Int(_) => NumericType::Int,
            Number::Real(_) => NumericType::Float,
        }
    }
}

impl From<Number> for ParamValue {
    fn from(n: Number) -> Self {
        match n {
            Number::Int(i) => ParamValue::Int(i),
            Number::Real(r) => ParamValue::Real(r),
        }
    }
}

/// Ordered `label -> number` map; order is declaration order.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct KeyedGroup {
    entries: Vec<(String, Number)>,
}

impl KeyedGroup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &str) -> Option<Number> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Updates an existing key or appends a new one.
    pub fn insert(&mut self, key: impl Into<String>, value: Number) {
        let key = key.into();
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key, value)),
        }
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.iter().any(|(k, _)| k == key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Number)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(String, Number)> for KeyedGroup {
    fn from_iter<I: IntoIterator<Item = (String, Number)>>(iter: I) -> Self {
        let mut g = KeyedGroup::new();
        for (k, v) in iter {
            g.insert(k, v);
        }
        g
    }
}

/// A typed parameter value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Text(String),
    Group(KeyedGroup),
}

impl ParamValue {
    pub fn kind(&self) -> ParamKind {
        match self {
            ParamValue::Int(_) => ParamKind::Int,
            ParamValue::Real(_) => ParamKind::Float,
            ParamValue::Text(_) => ParamKind::String,
            ParamValue::Group(_) => ParamKind::KeyedGroup,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Int(i) => Some(*i as f64),
            ParamValue::Real(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_group(&self) -> Option<&KeyedGroup> {
        match self {
            ParamValue::Group(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Real(r) => write!(f, "{r}"),
            ParamValue::Text(s) => f.write_str(s),
            ParamValue::Group(g) => {
                f.write_str("{")?;
                for (i, (k, v)) in g.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {}", ParamValue::from(v))?;
                }
                f.write_str("}")
            }
        }
    }
}

/// One bindable simulation parameter. `list_index == -1` addresses a scalar
/// field, `>= 0` one element of a list-valued field.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ParameterDef {
    pub name: String,
    pub kind: ParamKind,
    pub value: ParamValue,
    pub list_index: i32,
}

impl ParameterDef {
    pub fn new(name: impl Into<String>, value: ParamValue, list_index: i32) -> Self {
        Self {
            name: name.into(),
            kind: value.kind(),
            value,
            list_index,
        }
    }

    pub fn key(&self) -> ParamRef {
        ParamRef::new(self.name.clone(), self.list_index)
    }
}

/// Identity of a parameter: field name plus list index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ParamRef {
    pub name: String,
    pub list_index: i32,
}

impl ParamRef {
    pub fn new(name: impl Into<String>, list_index: i32) -> Self {
        Self {
            name: name.into(),
            list_index,
        }
    }

    pub fn scalar(name: impl Into<String>) -> Self {
        Self::new(name, -1)
    }
}

impl fmt::Display for ParamRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.list_index < 0 {
            f.write_str(&self.name)
        } else {
            write!(f, "{}[{}]", self.name, self.list_index)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DataKind {
    Image,
    Text,
}

impl DataKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DataKind::Image => "image",
            DataKind::Text => "text",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "image" => Some(DataKind::Image),
            "text" => Some(DataKind::Text),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DataArrayDef {
    pub name: String,
    pub kind: DataKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Geometry {
    pub x: i32,
    pub y: i32,
}

impl Geometry {
    pub fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }
}

/// `[min, max, nticks, increment]`. For dictslider items the fourth element
/// is called "scale" in the directive syntax; it is treated as the increment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RangeList {
    pub min: f64,
    pub max: f64,
    pub nticks: i64,
    pub increment: f64,
}

impl RangeList {
    pub fn new(min: f64, max: f64, nticks: i64, increment: f64) -> Self {
        Self {
            min,
            max,
            nticks,
            increment,
        }
    }

    /// `max > min`, `increment > 0`, `nticks >= 2`, all finite.
    pub fn is_valid(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && self.increment.is_finite()
            && self.max > self.min
            && self.increment > 0.0
            && self.nticks >= 2
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum ParamWidgetKind {
    Slider,
    DictSlider,
    TextIn,
    ListSel,
    Checkbox,
    RadioButton,
    Button,
}

impl ParamWidgetKind {
    pub const ALL: [ParamWidgetKind; 7] = [
        ParamWidgetKind::Slider,
        ParamWidgetKind::DictSlider,
        ParamWidgetKind::TextIn,
        ParamWidgetKind::ListSel,
        ParamWidgetKind::Checkbox,
        ParamWidgetKind::RadioButton,
        ParamWidgetKind::Button,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ParamWidgetKind::Slider => "SLIDER",
            ParamWidgetKind::DictSlider => "DICTSLIDER",
            ParamWidgetKind::TextIn => "TEXT_IN",
            ParamWidgetKind::ListSel => "LISTSEL",
            ParamWidgetKind::Checkbox => "CHECKBOX",
            ParamWidgetKind::RadioButton => "RADIOBUTTON",
            ParamWidgetKind::Button => "BUTTON",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SliderConfig {
    pub width: i32,
    /// Carried verbatim; not used for layout.
    pub height: i32,
    pub range: RangeList,
    pub value_type: NumericType,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DictSliderItem {
    pub label: String,
    pub range: RangeList,
    pub key: String,
    pub value_type: NumericType,
    pub init: Number,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DictSliderConfig {
    pub width: i32,
    pub columns: i32,
    /// `-1` sizes the text field to the number of items.
    pub rows: i32,
    /// 0 = slider + option menu, 1 = menu shows values, 2 = adds a text field.
    pub display_mode: u8,
    pub font_size: i32,
    /// Item selected when the widget is created.
    pub init_index: usize,
    pub items: Vec<DictSliderItem>,
}

impl DictSliderConfig {
    pub fn item(&self, key: &str) -> Option<&DictSliderItem> {
        self.items.iter().find(|i| i.key == key)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TextBoxSize {
    pub columns: i32,
    pub rows: i32,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ListSelConfig {
    pub columns: i32,
    pub rows: i32,
    pub items: Vec<String>,
    pub value_type: ParamKind,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ButtonConfig {
    pub label_text: String,
    pub button_text: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ParamWidgetConfig {
    Slider(SliderConfig),
    DictSlider(DictSliderConfig),
    TextIn(TextBoxSize),
    ListSel(ListSelConfig),
    Checkbox { items: Vec<String> },
    RadioButton { items: Vec<String> },
    Button(ButtonConfig),
}

impl ParamWidgetConfig {
    pub fn kind(&self) -> ParamWidgetKind {
        match self {
            ParamWidgetConfig::Slider(_) => ParamWidgetKind::Slider,
            ParamWidgetConfig::DictSlider(_) => ParamWidgetKind::DictSlider,
            ParamWidgetConfig::TextIn(_) => ParamWidgetKind::TextIn,
            ParamWidgetConfig::ListSel(_) => ParamWidgetKind::ListSel,
            ParamWidgetConfig::Checkbox { .. } => ParamWidgetKind::Checkbox,
            ParamWidgetConfig::RadioButton { .. } => ParamWidgetKind::RadioButton,
            ParamWidgetConfig::Button(_) => ParamWidgetKind::Button,
        }
    }

    /// Parameter kind this widget writes.
    pub fn target_kind(&self) -> ParamKind {
        match self {
            ParamWidgetConfig::Slider(s) => s.value_type.param_kind(),
            ParamWidgetConfig::DictSlider(_) => ParamKind::KeyedGroup,
            ParamWidgetConfig::ListSel(l) => l.value_type,
            ParamWidgetConfig::TextIn(_)
            | ParamWidgetConfig::Checkbox { .. }
            | ParamWidgetConfig::RadioButton { .. }
            | ParamWidgetConfig::Button(_) => ParamKind::String,
        }
    }

    /// Whether `value` is an admissible current value for this widget.
    pub fn accepts(&self, value: &ParamValue) -> bool {
        if value.kind() != self.target_kind() {
            return false;
        }
        match (self, value) {
            (ParamWidgetConfig::Slider(s), v) => {
                v.as_f64().map(|x| s.range.contains(x)).unwrap_or(false)
            }
            (ParamWidgetConfig::DictSlider(d), ParamValue::Group(g)) => {
                d.items.iter().all(|item| match g.get(&item.key) {
                    Some(n) => n.numeric_type() == item.value_type && item.range.contains(n.as_f64()),
                    None => false,
                })
            }
            (ParamWidgetConfig::Checkbox { items }, ParamValue::Text(bits)) => {
                bits.chars().count() == items.len() && bits.chars().all(|c| c == '0' || c == '1')
            }
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ParameterWidgetDef {
    pub name: String,
    pub geometry: Geometry,
    pub config: ParamWidgetConfig,
    pub target: ParamRef,
}

impl ParameterWidgetDef {
    pub fn kind(&self) -> ParamWidgetKind {
        self.config.kind()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum DataWidgetKind {
    Image,
    TextOut,
}

impl DataWidgetKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DataWidgetKind::Image => "IMAGE",
            DataWidgetKind::TextOut => "TEXT_OUT",
        }
    }

    pub fn data_kind(self) -> DataKind {
        match self {
            DataWidgetKind::Image => DataKind::Image,
            DataWidgetKind::TextOut => DataKind::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Justification {
    Left,
    Right,
    Center,
}

impl Justification {
    pub fn as_str(self) -> &'static str {
        match self {
            Justification::Left => "just_left",
            Justification::Right => "just_right",
            Justification::Center => "just_center",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "just_left" => Some(Justification::Left),
            "just_right" => Some(Justification::Right),
            "just_center" => Some(Justification::Center),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ImageConfig {
    pub scale: f64,
    pub lo: f64,
    pub hi: f64,
    pub value_type: NumericType,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TextOutConfig {
    pub columns: i32,
    pub rows: i32,
    pub options: Vec<Justification>,
}

impl TextOutConfig {
    /// Effective alignment: the last option given, `just_center` if none.
    pub fn justification(&self) -> Justification {
        self.options.last().copied().unwrap_or(Justification::Center)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DataWidgetConfig {
    Image(ImageConfig),
    TextOut(TextOutConfig),
}

impl DataWidgetConfig {
    pub fn kind(&self) -> DataWidgetKind {
        match self {
            DataWidgetConfig::Image(_) => DataWidgetKind::Image,
            DataWidgetConfig::TextOut(_) => DataWidgetKind::TextOut,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DataWidgetDef {
    pub name: String,
    pub geometry: Geometry,
    pub config: DataWidgetConfig,
    pub target: String,
}

impl DataWidgetDef {
    pub fn kind(&self) -> DataWidgetKind {
        self.config.kind()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CommentWidgetDef {
    pub name: String,
    pub geometry: Geometry,
    pub body: String,
}

/// All definitions belonging to one simulation context.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct WidgetCollection {
    pub context: SimulationContext,
    pub parameters: Vec<ParameterDef>,
    pub data: Vec<DataArrayDef>,
    pub pwidgets: Vec<ParameterWidgetDef>,
    pub dwidgets: Vec<DataWidgetDef>,
    pub comments: Vec<CommentWidgetDef>,
}

impl WidgetCollection {
    pub fn new(context: impl Into<String>) -> Self {
        Self {
            context: SimulationContext::new(context),
            ..Self::default()
        }
    }

    pub fn param(&self, target: &ParamRef) -> Option<&ParameterDef> {
        self.parameters
            .iter()
            .find(|p| p.name == target.name && p.list_index == target.list_index)
    }

    pub fn param_mut(&mut self, target: &ParamRef) -> Option<&mut ParameterDef> {
        self.parameters
            .iter_mut()
            .find(|p| p.name == target.name && p.list_index == target.list_index)
    }

    pub fn data_array(&self, name: &str) -> Option<&DataArrayDef> {
        self.data.iter().find(|d| d.name == name)
    }

    pub fn pwidget(&self, name: &str) -> Option<&ParameterWidgetDef> {
        self.pwidgets.iter().find(|w| w.name == name)
    }

    pub fn dwidget(&self, name: &str) -> Option<&DataWidgetDef> {
        self.dwidgets.iter().find(|w| w.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.parameters.is_empty()
            && self.data.is_empty()
            && self.pwidgets.is_empty()
            && self.dwidgets.is_empty()
            && self.comments.is_empty()
    }
}

/// A widget definition together with the parameter or data array it implies.
#[derive(Debug, Clone, PartialEq)]
pub enum WidgetSpec {
    Param {
        widget: ParameterWidgetDef,
        param: ParameterDef,
    },
    Data {
        widget: DataWidgetDef,
        data: DataArrayDef,
    },
}

impl WidgetSpec {
    pub fn name(&self) -> &str {
        match self {
            WidgetSpec::Param { widget, .. } => &widget.name,
            WidgetSpec::Data { widget, .. } => &widget.name,
        }
    }
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    EmptyName,
    DuplicateName,
    DuplicateParameter,
    DuplicateDataArray,
    ValueKindMismatch,
    BadListIndex,
    DanglingTarget,
    IncompatibleTarget,
    BadRange,
    ValueOutOfRange,
    NoDictItems,
    BadInitIndex,
    DuplicateItemKey,
    MissingItemKey,
    EncodingLength,
    NoItems,
    BadImageScale,
    BadImageRange,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::EmptyName => "empty name",
            Rule::DuplicateName => "duplicate widget name",
            Rule::DuplicateParameter => "duplicate parameter",
            Rule::DuplicateDataArray => "duplicate data array",
            Rule::ValueKindMismatch => "value kind mismatch",
            Rule::BadListIndex => "bad list index",
            Rule::DanglingTarget => "dangling target",
            Rule::IncompatibleTarget => "incompatible target",
            Rule::BadRange => "bad range",
            Rule::ValueOutOfRange => "value out of range",
            Rule::NoDictItems => "no dictslider items",
            Rule::BadInitIndex => "bad initial item index",
            Rule::DuplicateItemKey => "duplicate item key",
            Rule::MissingItemKey => "missing item key",
            Rule::EncodingLength => "encoding length",
            Rule::NoItems => "empty item list",
            Rule::BadImageScale => "bad image scale",
            Rule::BadImageRange => "bad image range",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One broken invariant, naming the offending record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub record: String,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.record, self.rule)
    }
}

/// Checks every collection invariant; an empty result means the collection
/// is consistent.
pub fn validate_collection(coll: &WidgetCollection) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |record: String, rule: Rule| out.push(Violation { record, rule });

    if coll.context.name.is_empty() {
        bad("tb_simulation".to_string(), Rule::EmptyName);
    }

    for (i, p) in coll.parameters.iter().enumerate() {
        let record = format!("tb_parameter:{}", p.key());
        if p.name.is_empty() {
            bad(record.clone(), Rule::EmptyName);
        }
        if p.value.kind() != p.kind {
            bad(record.clone(), Rule::ValueKindMismatch);
        }
        if p.list_index < -1 {
            bad(record.clone(), Rule::BadListIndex);
        }
        if coll.parameters[..i]
            .iter()
            .any(|q| q.name == p.name && q.list_index == p.list_index)
        {
            bad(record, Rule::DuplicateParameter);
        }
    }

    for (i, d) in coll.data.iter().enumerate() {
        let record = format!("tb_dataarray:{}", d.name);
        if d.name.is_empty() {
            bad(record.clone(), Rule::EmptyName);
        }
        if coll.data[..i].iter().any(|e| e.name == d.name) {
            bad(record, Rule::DuplicateDataArray);
        }
    }

    for (i, w) in coll.pwidgets.iter().enumerate() {
        let record = format!("tb_parameterwidget:{}", w.name);
        if w.name.is_empty() {
            bad(record.clone(), Rule::EmptyName);
        }
        if coll.pwidgets[..i].iter().any(|o| o.name == w.name) {
            bad(record.clone(), Rule::DuplicateName);
        }
        match &w.config {
            ParamWidgetConfig::Slider(s) if !s.range.is_valid() => {
                bad(record.clone(), Rule::BadRange)
            }
            ParamWidgetConfig::DictSlider(d) => {
                if d.items.is_empty() {
                    bad(record.clone(), Rule::NoDictItems);
                } else if d.init_index >= d.items.len() {
                    bad(record.clone(), Rule::BadInitIndex);
                }
                for (j, item) in d.items.iter().enumerate() {
                    let irec = format!("{record}.{}", item.key);
                    if !item.range.is_valid() {
                        bad(irec.clone(), Rule::BadRange);
                    } else if !item.range.contains(item.init.as_f64()) {
                        bad(irec.clone(), Rule::ValueOutOfRange);
                    }
                    if d.items[..j].iter().any(|o| o.key == item.key) {
                        bad(irec, Rule::DuplicateItemKey);
                    }
                }
            }
            ParamWidgetConfig::ListSel(l) if l.items.is_empty() => {
                bad(record.clone(), Rule::NoItems)
            }
            ParamWidgetConfig::Checkbox { items } | ParamWidgetConfig::RadioButton { items }
                if items.is_empty() =>
            {
                bad(record.clone(), Rule::NoItems)
            }
            _ => {}
        }

        let Some(param) = coll.param(&w.target) else {
            bad(record, Rule::DanglingTarget);
            continue;
        };
        if param.kind != w.config.target_kind() {
            bad(record, Rule::IncompatibleTarget);
            continue;
        }
        match (&w.config, &param.value) {
            (ParamWidgetConfig::Checkbox { items }, ParamValue::Text(bits))
                if bits.chars().count() != items.len() =>
            {
                bad(record, Rule::EncodingLength)
            }
            (ParamWidgetConfig::Slider(s), v) if s.range.is_valid() => {
                if !v.as_f64().map(|x| s.range.contains(x)).unwrap_or(false) {
                    bad(record, Rule::ValueOutOfRange);
                }
            }
            (ParamWidgetConfig::DictSlider(d), ParamValue::Group(g)) => {
                for item in &d.items {
                    match g.get(&item.key) {
                        None => bad(format!("{record}.{}", item.key), Rule::MissingItemKey),
                        Some(n) if item.range.is_valid() && !item.range.contains(n.as_f64()) => {
                            bad(format!("{record}.{}", item.key), Rule::ValueOutOfRange)
                        }
                        _ => {}
                    }
                }
            }
            _ => {}
        }
    }

    for (i, w) in coll.dwidgets.iter().enumerate() {
        let record = format!("tb_datawidget:{}", w.name);
        if w.name.is_empty() {
            bad(record.clone(), Rule::EmptyName);
        }
        if coll.dwidgets[..i].iter().any(|o| o.name == w.name) {
            bad(record.clone(), Rule::DuplicateName);
        }
        if let DataWidgetConfig::Image(img) = &w.config {
            if !(img.scale > 0.0) {
                bad(record.clone(), Rule::BadImageScale);
            }
            if !(img.hi > img.lo) {
                bad(record.clone(), Rule::BadImageRange);
            }
        }
        match coll.data_array(&w.target) {
            None => bad(record, Rule::DanglingTarget),
            Some(d) if d.kind != w.kind().data_kind() => bad(record, Rule::IncompatibleTarget),
            Some(_) => {}
        }
    }

    for (i, c) in coll.comments.iter().enumerate() {
        let record = format!("tb_commentwidget:{}", c.name);
        if c.name.is_empty() {
            bad(record.clone(), Rule::EmptyName);
        }
        if coll.comments[..i].iter().any(|o| o.name == c.name) {
            bad(record, Rule::DuplicateName);
        }
    }

    out
}

// ---------------------------------------------------------------------------
// upsert
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpsertPolicy {
    /// Keep geometry and current value of an existing widget; replace config.
    PreserveState,
    /// Replace every field of an existing widget.
    Overwrite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpsertOutcome {
    Created,
    Updated,
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("kind conflict: `{name}` already exists with a different kind")]
    KindConflict { name: String },
}

/// Inserts or updates a widget and the parameter/data array it implies.
pub fn upsert_widget(
    coll: &mut WidgetCollection,
    spec: WidgetSpec,
    policy: UpsertPolicy,
) -> Result<UpsertOutcome, ModelError> {
    match spec {
        WidgetSpec::Param { widget, param } => upsert_param_widget(coll, widget, param, policy),
        WidgetSpec::Data { widget, data } => upsert_data_widget(coll, widget, data, policy),
    }
}

fn upsert_param_widget(
    coll: &mut WidgetCollection,
    mut widget: ParameterWidgetDef,
    param: ParameterDef,
    policy: UpsertPolicy,
) -> Result<UpsertOutcome, ModelError> {
    let existing = coll.pwidgets.iter().position(|w| w.name == widget.name);
    if let Some(i) = existing {
        if coll.pwidgets[i].kind() != widget.kind() {
            return Err(ModelError::KindConflict { name: widget.name });
        }
    }
    let key = param.key();
    if let Some(p) = coll.param(&key) {
        let shared = coll
            .pwidgets
            .iter()
            .any(|w| w.name != widget.name && w.target == key);
        if shared && p.kind != param.kind {
            return Err(ModelError::KindConflict { name: param.name });
        }
    }

    let before = existing.map(|i| (coll.pwidgets[i].clone(), coll.param(&key).cloned()));
    let keep_state = policy == UpsertPolicy::PreserveState || existing.is_none();

    // Parameter record first: the current value survives when it still fits.
    let merged_value = match coll.param(&key) {
        Some(p) if keep_state && p.kind == param.kind => {
            merge_value(&widget.config, &p.value, &param.value)
        }
        _ => param.value.clone(),
    };
    match coll.param_mut(&key) {
        Some(p) => {
            p.kind = param.kind;
            p.value = merged_value;
        }
        None => coll.parameters.push(ParameterDef {
            value: merged_value,
            ..param
        }),
    }

    match existing {
        None => {
            widget.geometry = Geometry::default();
            coll.pwidgets.push(widget);
            Ok(UpsertOutcome::Created)
        }
        Some(i) => {
            if policy == UpsertPolicy::PreserveState {
                widget.geometry = coll.pwidgets[i].geometry;
            }
            coll.pwidgets[i] = widget;
            let after = (coll.pwidgets[i].clone(), coll.param(&key).cloned());
            Ok(if before.as_ref() == Some(&after) {
                UpsertOutcome::Unchanged
            } else {
                UpsertOutcome::Updated
            })
        }
    }
}

/// Keeps `current` (or, for groups, each current item value) when the new
/// config still accepts it; otherwise falls back to the declared value.
fn merge_value(config: &ParamWidgetConfig, current: &ParamValue, declared: &ParamValue) -> ParamValue {
    if let (ParamWidgetConfig::DictSlider(d), ParamValue::Group(cur), ParamValue::Group(decl)) =
        (config, current, declared)
    {
        return ParamValue::Group(
            decl.iter()
                .map(|(k, v)| {
                    let kept = cur.get(k).filter(|n| {
                        d.item(k)
                            .map(|item| {
                                n.numeric_type() == item.value_type
                                    && item.range.contains(n.as_f64())
                            })
                            .unwrap_or(false)
                    });
                    (k.to_string(), kept.unwrap_or(v))
                })
                .collect(),
        );
    }
    if config.accepts(current) {
        current.clone()
    } else {
        declared.clone()
    }
}

fn upsert_data_widget(
    coll: &mut WidgetCollection,
    mut widget: DataWidgetDef,
    data: DataArrayDef,
    policy: UpsertPolicy,
) -> Result<UpsertOutcome, ModelError> {
    let existing = coll.dwidgets.iter().position(|w| w.name == widget.name);
    if let Some(i) = existing {
        if coll.dwidgets[i].kind() != widget.kind() {
            return Err(ModelError::KindConflict { name: widget.name });
        }
    }
    if let Some(d) = coll.data_array(&data.name) {
        let shared = coll
            .dwidgets
            .iter()
            .any(|w| w.name != widget.name && w.target == data.name);
        if shared && d.kind != data.kind {
            return Err(ModelError::KindConflict { name: data.name });
        }
    }
    match coll.data.iter_mut().find(|d| d.name == data.name) {
        Some(d) => d.kind = data.kind,
        None => coll.data.push(data),
    }
    match existing {
        None => {
            widget.geometry = Geometry::default();
            coll.dwidgets.push(widget);
            Ok(UpsertOutcome::Created)
        }
        Some(i) => {
            if policy == UpsertPolicy::PreserveState {
                widget.geometry = coll.dwidgets[i].geometry;
            }
            if coll.dwidgets[i] == widget {
                Ok(UpsertOutcome::Unchanged)
            } else {
                coll.dwidgets[i] = widget;
                Ok(UpsertOutcome::Updated)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// binding resolution
// ---------------------------------------------------------------------------

/// Shape of one field exposed by a hosted simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldShape {
    Scalar(ParamKind),
    List(ParamKind, usize),
    Group(Vec<String>),
}

/// The parameter and data fields a hosted simulation exposes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Registry {
    pub params: BTreeMap<String, FieldShape>,
    pub data: BTreeMap<String, DataKind>,
}

impl Registry {
    pub fn with_param(mut self, name: impl Into<String>, shape: FieldShape) -> Self {
        self.params.insert(name.into(), shape);
        self
    }

    pub fn with_data(mut self, name: impl Into<String>, kind: DataKind) -> Self {
        self.data.insert(name.into(), kind);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WidgetTable {
    Parameter,
    Data,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WidgetRef {
    pub table: WidgetTable,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unresolved {
    MissingField,
    KindMismatch,
    NotAList,
    IndexOutOfRange,
    MissingItem(String),
}

impl fmt::Display for Unresolved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unresolved::MissingField => f.write_str("no such field"),
            Unresolved::KindMismatch => f.write_str("field kind mismatch"),
            Unresolved::NotAList => f.write_str("field is not a list"),
            Unresolved::IndexOutOfRange => f.write_str("list index out of range"),
            Unresolved::MissingItem(k) => write!(f, "missing group key `{k}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub widget: WidgetRef,
    pub field: String,
    /// `None` when the widget is live.
    pub problem: Option<Unresolved>,
    /// Dictslider items whose key the group field lacks.
    pub missing_items: Vec<String>,
}

impl Binding {
    pub fn is_bound(&self) -> bool {
        self.problem.is_none()
    }
}

/// Widget-to-field map for one collection against one simulation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BindingTable {
    pub bindings: Vec<Binding>,
}

impl BindingTable {
    pub fn get(&self, table: WidgetTable, name: &str) -> Option<&Binding> {
        self.bindings
            .iter()
            .find(|b| b.widget.table == table && b.widget.name == name)
    }

    pub fn is_bound(&self, table: WidgetTable, name: &str) -> bool {
        self.get(table, name).map(Binding::is_bound).unwrap_or(false)
    }

    /// Every unresolved name: whole widgets and individual dictslider items.
    pub fn unresolved(&self) -> Vec<(WidgetRef, String, Unresolved)> {
        let mut out = Vec::new();
        for b in &self.bindings {
            if let Some(p) = &b.problem {
                out.push((b.widget.clone(), b.field.clone(), p.clone()));
            }
            for key in &b.missing_items {
                out.push((
                    b.widget.clone(),
                    format!("{}.{key}", b.field),
                    Unresolved::MissingItem(key.clone()),
                ));
            }
        }
        out
    }
}

/// Maps every widget in `coll` to a field in `registry`. Unresolvable
/// widgets are reported, never fatal.
pub fn resolve_bindings(coll: &WidgetCollection, registry: &Registry) -> BindingTable {
    let mut bindings = Vec::new();
    for w in &coll.pwidgets {
        let want = w.config.target_kind();
        let mut missing_items = Vec::new();
        let problem = match registry.params.get(&w.target.name) {
            None => Some(Unresolved::MissingField),
            Some(shape) => match (shape, w.target.list_index) {
                (FieldShape::Scalar(k), -1) if *k == want => None,
                (FieldShape::List(k, len), i) if i >= 0 => {
                    if *k != want {
                        Some(Unresolved::KindMismatch)
                    } else if (i as usize) >= *len {
                        Some(Unresolved::IndexOutOfRange)
                    } else {
                        None
                    }
                }
                (FieldShape::Group(keys), -1) if want == ParamKind::KeyedGroup => {
                    if let ParamWidgetConfig::DictSlider(d) = &w.config {
                        missing_items = d
                            .items
                            .iter()
                            .filter(|item| !keys.contains(&item.key))
                            .map(|item| item.key.clone())
                            .collect();
                    }
                    None
                }
                (FieldShape::Scalar(_) | FieldShape::Group(_), i) if i >= 0 => {
                    Some(Unresolved::NotAList)
                }
                _ => Some(Unresolved::KindMismatch),
            },
        };
        bindings.push(Binding {
            widget: WidgetRef {
                table: WidgetTable::Parameter,
                name: w.name.clone(),
            },
            field: w.target.name.clone(),
            problem,
            missing_items,
        });
    }
    for w in &coll.dwidgets {
        let problem = match registry.data.get(&w.target) {
            None => Some(Unresolved::MissingField),
            Some(k) if *k != w.kind().data_kind() => Some(Unresolved::KindMismatch),
            Some(_) => None,
        };
        bindings.push(Binding {
            widget: WidgetRef {
                table: WidgetTable::Data,
                name: w.name.clone(),
            },
            field: w.target.clone(),
            problem,
            missing_items: Vec::new(),
        });
    }
    BindingTable { bindings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn slider(name: &str, var: &str, min: f64, max: f64, init: i64) -> WidgetSpec {
        WidgetSpec::Param {
            widget: ParameterWidgetDef {
                name: name.into(),
                geometry: Geometry::default(),
                config: ParamWidgetConfig::Slider(SliderConfig {
                    width: 200,
                    height: 1,
                    range: RangeList::new(min, max, 3, 1.0),
                    value_type: NumericType::Int,
                }),
                target: ParamRef::scalar(var),
            },
            param: ParameterDef::new(var, ParamValue::Int(init), -1),
        }
    }

    fn checkbox(name: &str, var: &str, items: &[&str], bits: &str) -> WidgetSpec {
        WidgetSpec::Param {
            widget: ParameterWidgetDef {
                name: name.into(),
                geometry: Geometry::default(),
                config: ParamWidgetConfig::Checkbox {
                    items: items.iter().map(|s| s.to_string()).collect(),
                },
                target: ParamRef::scalar(var),
            },
            param: ParameterDef::new(var, ParamValue::Text(bits.into()), -1),
        }
    }

    #[test]
    fn empty_default_collection_is_valid() {
        let coll = WidgetCollection::new(DEFAULT_CONTEXT);
        assert_eq!(validate_collection(&coll), vec![]);
    }

    #[test]
    fn dangling_slider_target_is_one_violation() {
        let mut coll = WidgetCollection::new(DEFAULT_CONTEXT);
        if let WidgetSpec::Param { widget, .. } = slider("s", "missing", 0.0, 9.0, 0) {
            coll.pwidgets.push(widget);
        }
        let v = validate_collection(&coll);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::DanglingTarget);
        assert_eq!(v[0].rule.as_str(), "dangling target");
    }

    #[test]
    fn checkbox_bitstring_length_violation() {
        let mut coll = WidgetCollection::new(DEFAULT_CONTEXT);
        if let WidgetSpec::Param { widget, param } = checkbox("c", "opts", &["a", "b", "c", "d"], "011") {
            coll.pwidgets.push(widget);
            coll.parameters.push(param);
        }
        let v = validate_collection(&coll);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::EncodingLength);
    }

    #[test]
    fn new_widget_is_appended_at_origin() {
        let mut coll = WidgetCollection::default();
        let out = upsert_widget(
            &mut coll,
            slider("Decay Factor", "decay", 0.0, 9.0, 1),
            UpsertPolicy::PreserveState,
        )
        .unwrap();
        assert_eq!(out, UpsertOutcome::Created);
        assert_eq!(coll.pwidgets[0].geometry, Geometry::new(0, 0));
        assert!(validate_collection(&coll).is_empty());
    }

    #[test]
    fn preserve_keeps_moved_geometry_and_value() {
        let mut coll = WidgetCollection::default();
        upsert_widget(&mut coll, slider("s", "x", 0.0, 9.0, 1), UpsertPolicy::PreserveState).unwrap();
        coll.pwidgets[0].geometry = Geometry::new(40, 80);
        coll.param_mut(&ParamRef::scalar("x")).unwrap().value = ParamValue::Int(7);

        let out = upsert_widget(&mut coll, slider("s", "x", 0.0, 20.0, 1), UpsertPolicy::PreserveState)
            .unwrap();
        assert_eq!(out, UpsertOutcome::Updated);
        assert_eq!(coll.pwidgets[0].geometry, Geometry::new(40, 80));
        assert_eq!(coll.param(&ParamRef::scalar("x")).unwrap().value, ParamValue::Int(7));
        match &coll.pwidgets[0].config {
            ParamWidgetConfig::Slider(s) => assert_eq!(s.range.max, 20.0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn preserve_resets_value_that_left_the_range() {
        let mut coll = WidgetCollection::default();
        upsert_widget(&mut coll, slider("s", "x", 0.0, 9.0, 1), UpsertPolicy::PreserveState).unwrap();
        coll.param_mut(&ParamRef::scalar("x")).unwrap().value = ParamValue::Int(8);
        upsert_widget(&mut coll, slider("s", "x", 0.0, 5.0, 2), UpsertPolicy::PreserveState).unwrap();
        assert_eq!(coll.param(&ParamRef::scalar("x")).unwrap().value, ParamValue::Int(2));
        assert!(validate_collection(&coll).is_empty());
    }

    #[test]
    fn overwrite_replaces_geometry_and_value() {
        let mut coll = WidgetCollection::default();
        upsert_widget(&mut coll, slider("s", "x", 0.0, 9.0, 1), UpsertPolicy::Overwrite).unwrap();
        coll.pwidgets[0].geometry = Geometry::new(40, 80);
        coll.param_mut(&ParamRef::scalar("x")).unwrap().value = ParamValue::Int(7);
        upsert_widget(&mut coll, slider("s", "x", 0.0, 9.0, 1), UpsertPolicy::Overwrite).unwrap();
        assert_eq!(coll.pwidgets[0].geometry, Geometry::new(0, 0));
        assert_eq!(coll.param(&ParamRef::scalar("x")).unwrap().value, ParamValue::Int(1));
    }

    #[test]
    fn kind_change_for_same_name_conflicts() {
        let mut coll = WidgetCollection::default();
        upsert_widget(&mut coll, slider("x", "a", 0.0, 9.0, 0), UpsertPolicy::PreserveState).unwrap();
        let err = upsert_widget(&mut coll, checkbox("x", "b", &["p"], "0"), UpsertPolicy::PreserveState)
            .unwrap_err();
        assert_eq!(err, ModelError::KindConflict { name: "x".into() });
        assert!(err.to_string().contains("kind conflict"));
    }

    #[test]
    fn shared_parameter_kind_change_conflicts() {
        let mut coll = WidgetCollection::default();
        upsert_widget(&mut coll, slider("s1", "v", 0.0, 9.0, 0), UpsertPolicy::PreserveState).unwrap();
        let err = upsert_widget(&mut coll, checkbox("c1", "v", &["p"], "0"), UpsertPolicy::PreserveState)
            .unwrap_err();
        assert_eq!(err, ModelError::KindConflict { name: "v".into() });
    }

    #[test]
    fn resolve_reports_unbound_names() {
        let mut coll = WidgetCollection::default();
        upsert_widget(&mut coll, slider("Decay", "decay", 0.0, 9.0, 0), UpsertPolicy::PreserveState).unwrap();
        upsert_widget(
            &mut coll,
            WidgetSpec::Data {
                widget: DataWidgetDef {
                    name: "Voltage".into(),
                    geometry: Geometry::default(),
                    config: DataWidgetConfig::Image(ImageConfig {
                        scale: 1.0,
                        lo: 0.0,
                        hi: 255.0,
                        value_type: NumericType::Int,
                    }),
                    target: "im_voltage".into(),
                },
                data: DataArrayDef {
                    name: "im_voltage".into(),
                    kind: DataKind::Image,
                },
            },
            UpsertPolicy::PreserveState,
        )
        .unwrap();
        let reg = Registry::default().with_param("decay", FieldShape::Scalar(ParamKind::Int));
        let table = resolve_bindings(&coll, &reg);
        assert!(table.is_bound(WidgetTable::Parameter, "Decay"));
        assert!(!table.is_bound(WidgetTable::Data, "Voltage"));
        let unresolved = table.unresolved();
        assert_eq!(unresolved.len(), 1);
        assert_eq!(unresolved[0].1, "im_voltage");
    }

    #[test]
    fn dictslider_missing_key_is_reported_per_item() {
        let items = vec![
            DictSliderItem {
                label: "Item1".into(),
                range: RangeList::new(0.0, 9.0, 3, 1.0),
                key: "item1".into(),
                value_type: NumericType::Int,
                init: Number::Int(3),
            },
            DictSliderItem {
                label: "Item2".into(),
                range: RangeList::new(0.0, 30.0, 4, 2.0),
                key: "item2".into(),
                value_type: NumericType::Float,
                init: Number::Real(0.5),
            },
        ];
        let group: KeyedGroup = items.iter().map(|i| (i.key.clone(), i.init)).collect();
        let mut coll = WidgetCollection::default();
        upsert_widget(
            &mut coll,
            WidgetSpec::Param {
                widget: ParameterWidgetDef {
                    name: "ParDict".into(),
                    geometry: Geometry::default(),
                    config: ParamWidgetConfig::DictSlider(DictSliderConfig {
                        width: 200,
                        columns: 20,
                        rows: -1,
                        display_mode: 2,
                        font_size: 10,
                        init_index: 0,
                        items,
                    }),
                    target: ParamRef::scalar("dict_par"),
                },
                param: ParameterDef::new("dict_par", ParamValue::Group(group), -1),
            },
            UpsertPolicy::PreserveState,
        )
        .unwrap();
        assert!(validate_collection(&coll).is_empty());
        let reg = Registry::default()
            .with_param("dict_par", FieldShape::Group(vec!["item2".into()]));
        let table = resolve_bindings(&coll, &reg);
        assert!(table.is_bound(WidgetTable::Parameter, "ParDict"));
        let un = table.unresolved();
        assert_eq!(un.len(), 1);
        assert_eq!(un[0].1, "dict_par.item1");
        assert_eq!(un[0].2, Unresolved::MissingItem("item1".into()));
    }

    #[test]
    fn list_index_must_be_in_range() {
        let mut coll = WidgetCollection::default();
        let WidgetSpec::Param { mut widget, mut param } = slider("s", "w", 0.0, 9.0, 0) else {
            unreachable!()
        };
        widget.target.list_index = 2;
        param.list_index = 2;
        upsert_widget(&mut coll, WidgetSpec::Param { widget, param }, UpsertPolicy::PreserveState).unwrap();
        let short = Registry::default().with_param("w", FieldShape::List(ParamKind::Int, 2));
        let long = Registry::default().with_param("w", FieldShape::List(ParamKind::Int, 3));
        assert_eq!(
            resolve_bindings(&coll, &short).bindings[0].problem,
            Some(Unresolved::IndexOutOfRange)
        );
        assert!(resolve_bindings(&coll, &long).bindings[0].is_bound());
    }
}
