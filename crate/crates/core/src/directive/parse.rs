use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::scan::{Directive, Keyword};
use super::{ParseError, ParseErrorKind};
use crate::model::*;

/// Result of parsing one directive line.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectiveRecord {
    /// `SIMULATION & name`
    Context(String),
    Widget(WidgetSpec),
    /// Only produced by [`parse_directive`]; [`parse_directives`] folds items
    /// into their dictslider.
    DictSliderItem(DictSliderItem),
}

type Kind = ParseErrorKind;

fn parse_int(s: &str) -> Result<i64, Kind> {
    s.parse::<i64>().map_err(|_| Kind::BadNumber(s.to_string()))
}

fn parse_real(s: &str) -> Result<f64, Kind> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Kind::BadNumber(s.to_string())),
    }
}

fn parse_i32(s: &str) -> Result<i32, Kind> {
    i32::try_from(parse_int(s)?).map_err(|_| Kind::BadNumber(s.to_string()))
}

fn parse_list(s: &str) -> Result<Vec<&str>, Kind> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Kind::NotAList(s.to_string()))?
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(str::trim).collect())
}

fn parse_sized_list(s: &str, n: usize) -> Result<Vec<&str>, Kind> {
    let items = parse_list(s)?;
    if items.len() != n {
        return Err(Kind::ListArity {
            expected: n,
            found: items.len(),
        });
    }
    Ok(items)
}

fn parse_range(s: &str) -> Result<RangeList, Kind> {
    let items = parse_list(s)?;
    if items.len() != 4 {
        return Err(Kind::RangeListArity(items.len()));
    }
    let range = RangeList::new(
        parse_real(items[0])?,
        parse_real(items[1])?,
        parse_int(items[2])?,
        parse_real(items[3])?,
    );
    if !range.is_valid() {
        return Err(Kind::InvalidRange);
    }
    Ok(range)
}

fn parse_numeric_type(s: &str) -> Result<NumericType, Kind> {
    match s {
        "int" => Ok(NumericType::Int),
        "float" => Ok(NumericType::Float),
        _ => Err(Kind::BadType(s.to_string())),
    }
}

fn parse_value_type(s: &str) -> Result<ParamKind, Kind> {
    match s {
        "int" => Ok(ParamKind::Int),
        "float" => Ok(ParamKind::Float),
        "string" => Ok(ParamKind::String),
        _ => Err(Kind::BadType(s.to_string())),
    }
}

fn parse_number(s: &str, ty: NumericType) -> Result<Number, Kind> {
    Ok(match ty {
        NumericType::Int => Number::Int(parse_int(s)?),
        NumericType::Float => Number::Real(parse_real(s)?),
    })
}

/// Converts list-selection text into a value of the declared kind.
pub(crate) fn convert_item(s: &str, kind: ParamKind) -> Result<ParamValue, Kind> {
    Ok(match kind {
        ParamKind::Int => ParamValue::Int(parse_int(s)?),
        ParamKind::Float => ParamValue::Real(parse_real(s)?),
        _ => ParamValue::Text(s.to_string()),
    })
}

fn parse_index(s: &str) -> Result<i32, Kind> {
    let i = parse_i32(s)?;
    if i < -1 {
        return Err(Kind::BadNumber(s.to_string()));
    }
    Ok(i)
}

fn name(s: &str) -> Result<String, Kind> {
    if s.is_empty() {
        Err(Kind::EmptyName)
    } else {
        Ok(s.to_string())
    }
}

fn items(s: &str) -> Result<Vec<String>, Kind> {
    Ok(parse_list(s)?.into_iter().map(str::to_string).collect())
}

fn param_widget(
    widget_name: &str,
    config: ParamWidgetConfig,
    var: &str,
    index: i32,
    value: ParamValue,
) -> Result<DirectiveRecord, Kind> {
    let var = name(var)?;
    Ok(DirectiveRecord::Widget(WidgetSpec::Param {
        widget: ParameterWidgetDef {
            name: name(widget_name)?,
            geometry: Geometry::default(),
            config,
            target: ParamRef::new(var.clone(), index),
        },
        param: ParameterDef::new(var, value, index),
    }))
}

fn data_widget(
    widget_name: &str,
    config: DataWidgetConfig,
    var: &str,
) -> Result<DirectiveRecord, Kind> {
    let kind = config.kind().data_kind();
    let var = name(var)?;
    Ok(DirectiveRecord::Widget(WidgetSpec::Data {
        widget: DataWidgetDef {
            name: name(widget_name)?,
            geometry: Geometry::default(),
            config,
            target: var.clone(),
        },
        data: DataArrayDef { name: var, kind },
    }))
}

fn text_out_options(s: &str) -> Result<Vec<Justification>, Kind> {
    if s == "None" {
        return Ok(Vec::new());
    }
    let words = if s.starts_with('[') {
        parse_list(s)?
    } else {
        alloc::vec![s]
    };
    words
        .into_iter()
        .map(|w| Justification::parse(w).ok_or_else(|| Kind::BadOption(w.to_string())))
        .collect()
}

fn parse_fields(kw: Keyword, f: &[String]) -> Result<DirectiveRecord, Kind> {
    let f: Vec<&str> = f.iter().map(String::as_str).collect();
    if matches!(
        kw,
        Keyword::ListSel | Keyword::Checkbox | Keyword::RadioButton | Keyword::Button
    ) {
        if let Some(q) = f.iter().find(|s| s.contains('"') || s.contains('\'')) {
            return Err(Kind::QuotationMark(q.to_string()));
        }
    }
    match kw {
        Keyword::Simulation => Ok(DirectiveRecord::Context(name(f[0])?)),
        Keyword::Slider => {
            let size = parse_sized_list(f[1], 2)?;
            let range = parse_range(f[2])?;
            let ty = parse_numeric_type(f[5])?;
            let init = parse_number(f[6], ty)?;
            if !range.contains(init.as_f64()) {
                return Err(Kind::InitOutOfRange(init.as_f64()));
            }
            let config = ParamWidgetConfig::Slider(SliderConfig {
                width: parse_i32(size[0])?,
                height: parse_i32(size[1])?,
                range,
                value_type: ty,
            });
            param_widget(f[0], config, f[3], parse_index(f[4])?, init.into())
        }
        Keyword::DictSlider => {
            let size = parse_sized_list(f[1], 5)?;
            let mode = parse_int(size[3])?;
            if !(0..=2).contains(&mode) {
                return Err(Kind::BadDisplayMode(mode));
            }
            let init_index = parse_int(f[3])?;
            if init_index < 0 {
                return Err(Kind::BadInitIndex {
                    index: init_index,
                    items: 0,
                });
            }
            let config = ParamWidgetConfig::DictSlider(DictSliderConfig {
                width: parse_i32(size[0])?,
                columns: parse_i32(size[1])?,
                rows: parse_i32(size[2])?,
                display_mode: mode as u8,
                font_size: parse_i32(size[4])?,
                init_index: init_index as usize,
                items: Vec::new(),
            });
            param_widget(f[0], config, f[2], -1, ParamValue::Group(KeyedGroup::new()))
        }
        Keyword::DictSliderItem => {
            let range = parse_range(f[1])?;
            let ty = parse_numeric_type(f[3])?;
            let init = parse_number(f[4], ty)?;
            if !range.contains(init.as_f64()) {
                return Err(Kind::InitOutOfRange(init.as_f64()));
            }
            Ok(DirectiveRecord::DictSliderItem(DictSliderItem {
                label: name(f[0])?,
                range,
                key: name(f[2])?,
                value_type: ty,
                init,
            }))
        }
        Keyword::TextIn => {
            let size = parse_sized_list(f[1], 2)?;
            let config = ParamWidgetConfig::TextIn(TextBoxSize {
                columns: parse_i32(size[0])?,
                rows: parse_i32(size[1])?,
            });
            param_widget(f[0], config, f[2], parse_index(f[3])?, ParamValue::Text(f[4].into()))
        }
        Keyword::ListSel => {
            let size = parse_sized_list(f[1], 2)?;
            let list = items(f[2])?;
            let ty = parse_value_type(f[5])?;
            for item in &list {
                convert_item(item, ty)?;
            }
            let init = convert_item(f[6], ty)?;
            let config = ParamWidgetConfig::ListSel(ListSelConfig {
                columns: parse_i32(size[0])?,
                rows: parse_i32(size[1])?,
                items: list,
                value_type: ty,
            });
            param_widget(f[0], config, f[3], parse_index(f[4])?, init)
        }
        Keyword::Checkbox => {
            let list = items(f[1])?;
            let bits = f[3];
            if bits.chars().count() != list.len() || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(Kind::BitstringLength {
                    bits: bits.to_string(),
                    items: list.len(),
                });
            }
            let config = ParamWidgetConfig::Checkbox { items: list };
            param_widget(f[0], config, f[2], -1, ParamValue::Text(bits.into()))
        }
        Keyword::RadioButton => {
            let config = ParamWidgetConfig::RadioButton { items: items(f[1])? };
            param_widget(f[0], config, f[2], -1, ParamValue::Text(f[3].into()))
        }
        Keyword::Button => {
            let texts = parse_sized_list(f[1], 2)?;
            let config = ParamWidgetConfig::Button(ButtonConfig {
                label_text: texts[0].to_string(),
                button_text: texts[1].to_string(),
            });
            param_widget(f[0], config, f[2], -1, ParamValue::Text("0".into()))
        }
        Keyword::Image => {
            let scale = parse_real(f[1])?;
            let bounds = parse_sized_list(f[2], 2)?;
            let (lo, hi) = (parse_real(bounds[0])?, parse_real(bounds[1])?);
            let ty = parse_numeric_type(f[4])?;
            if !(scale > 0.0 && hi > lo) {
                return Err(Kind::BadImage);
            }
            let config = DataWidgetConfig::Image(ImageConfig {
                scale,
                lo,
                hi,
                value_type: ty,
            });
            data_widget(f[0], config, f[3])
        }
        Keyword::TextOut => {
            let size = parse_sized_list(f[1], 2)?;
            let config = DataWidgetConfig::TextOut(TextOutConfig {
                columns: parse_i32(size[0])?,
                rows: parse_i32(size[1])?,
                options: text_out_options(f[2])?,
            });
            data_widget(f[0], config, f[3])
        }
    }
}

/// Converts one scanned directive into its record.
pub fn parse_directive(d: &Directive) -> Result<DirectiveRecord, ParseError> {
    let expected = d.keyword.arity();
    if d.fields.len() != expected {
        return Err(ParseError {
            line: d.line_no,
            kind: Kind::Arity {
                keyword: d.keyword.as_str(),
                expected,
                found: d.fields.len(),
            },
        });
    }
    parse_fields(d.keyword, &d.fields).map_err(|kind| ParseError {
        line: d.line_no,
        kind,
    })
}

/// Parses a directive sequence, attaching DICTSLIDERITEMs to the dictslider
/// they follow and building its keyed-group parameter.
pub fn parse_directives(directives: &[Directive]) -> Result<Vec<DirectiveRecord>, ParseError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < directives.len() {
        let d = &directives[i];
        let record = parse_directive(d)?;
        i += 1;
        let record = match record {
            DirectiveRecord::DictSliderItem(_) => {
                return Err(ParseError {
                    line: d.line_no,
                    kind: Kind::OrphanItem,
                })
            }
            DirectiveRecord::Widget(WidgetSpec::Param {
                mut widget,
                mut param,
            }) if widget.kind() == ParamWidgetKind::DictSlider => {
                let ParamWidgetConfig::DictSlider(cfg) = &mut widget.config else {
                    unreachable!()
                };
                while let Some(next) = directives.get(i) {
                    if next.keyword != Keyword::DictSliderItem {
                        break;
                    }
                    let DirectiveRecord::DictSliderItem(item) = parse_directive(next)? else {
                        unreachable!()
                    };
                    if cfg.item(&item.key).is_some() {
                        return Err(ParseError {
                            line: next.line_no,
                            kind: Kind::DuplicateKey(item.key),
                        });
                    }
                    cfg.items.push(item);
                    i += 1;
                }
                let fail = |kind| ParseError {
                    line: d.line_no,
                    kind,
                };
                if cfg.items.is_empty() {
                    return Err(fail(Kind::MissingItems));
                }
                if cfg.init_index >= cfg.items.len() {
                    return Err(fail(Kind::BadInitIndex {
                        index: cfg.init_index as i64,
                        items: cfg.items.len(),
                    }));
                }
                param.value = ParamValue::Group(
                    cfg.items.iter().map(|it| (it.key.clone(), it.init)).collect(),
                );
                DirectiveRecord::Widget(WidgetSpec::Param { widget, param })
            }
            other => other,
        };
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_source, scan_source};
    use super::*;

    fn one(line: &str) -> Result<DirectiveRecord, ParseError> {
        let mut v = parse_source(line)?;
        assert_eq!(v.len(), 1);
        Ok(v.remove(0))
    }

    fn param_spec(r: DirectiveRecord) -> (ParameterWidgetDef, ParameterDef) {
        match r {
            DirectiveRecord::Widget(WidgetSpec::Param { widget, param }) => (widget, param),
            other => panic!("not a parameter widget: {other:?}"),
        }
    }

    #[test]
    fn slider_fields() {
        let (w, p) = param_spec(
            one("#@IVISIT:SLIDER  & name    & [200,1] & [0,9,3,1] & var & -1 & int & 0").unwrap(),
        );
        assert_eq!(w.name, "name");
        assert_eq!(w.target, ParamRef::scalar("var"));
        let ParamWidgetConfig::Slider(s) = w.config else { panic!() };
        assert_eq!((s.width, s.height), (200, 1));
        assert_eq!(s.range, RangeList::new(0.0, 9.0, 3, 1.0));
        assert_eq!(s.value_type, NumericType::Int);
        assert_eq!(p.value, ParamValue::Int(0));
        assert_eq!(p.list_index, -1);
    }

    #[test]
    fn short_rangelist_is_rangelist_arity() {
        let e = one("#@IVISIT:SLIDER & name & [200,1] & [0,9,3] & var & -1 & int & 0").unwrap_err();
        assert_eq!(e.kind, Kind::RangeListArity(3));
        assert!(e.to_string().contains("rangelist arity"));
    }

    #[test]
    fn wrong_field_count() {
        let e = one("#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & int").unwrap_err();
        assert!(matches!(e.kind, Kind::Arity { expected: 7, found: 6, .. }));
    }

    #[test]
    fn float_literals() {
        let (_, p) = param_spec(
            one("#@IVISIT:SLIDER & s & [200,1] & [-1e1,1.5e1,3,.5] & v & 2 & float & .5").unwrap(),
        );
        assert_eq!(p.value, ParamValue::Real(0.5));
        assert_eq!(p.list_index, 2);
        assert!(one("#@IVISIT:SLIDER & s & [200,1] & [0,9,3,1] & v & -1 & int & 1.5").is_err());
        assert!(one("#@IVISIT:SLIDER & s & [200,1] & [0,inf,3,1] & v & -1 & float & 1").is_err());
        assert!(matches!(
            one("#@IVISIT:SLIDER & s & [200,1] & [0,9,3,1] & v & -1 & double & 1").unwrap_err().kind,
            Kind::BadType(_)
        ));
    }

    #[test]
    fn init_outside_range_is_rejected() {
        let e = one("#@IVISIT:SLIDER & s & [200,1] & [0,9,3,1] & v & -1 & int & 10").unwrap_err();
        assert_eq!(e.kind, Kind::InitOutOfRange(10.0));
    }

    #[test]
    fn dictslider_needs_items() {
        let e = parse_source("#@IVISIT:DICTSLIDER & P & [200,20,-1,2,10] & d & 0").unwrap_err();
        assert_eq!(e.kind, Kind::MissingItems);
    }

    #[test]
    fn dictslider_groups_items() {
        let src = "#@IVISIT:DICTSLIDER  & ParDict  & [200,20,-1,2,10] & dict_par & 0 \n\
                   #@IVISIT:DICTSLIDERITEM & Item1 & [0, 9,3,1] & item1 & int   & 3\n\
                   #@IVISIT:DICTSLIDERITEM & Item2 & [0,30,4,2] & item2 & float & .5";
        let recs = parse_source(src).unwrap();
        assert_eq!(recs.len(), 1);
        let (w, p) = param_spec(recs.into_iter().next().unwrap());
        let ParamWidgetConfig::DictSlider(cfg) = &w.config else { panic!() };
        assert_eq!(cfg.items.len(), 2);
        assert_eq!(cfg.rows, -1);
        assert_eq!(cfg.display_mode, 2);
        let g = p.value.as_group().unwrap();
        assert_eq!(g.keys().collect::<Vec<_>>(), ["item1", "item2"]);
        assert_eq!(g.get("item2"), Some(Number::Real(0.5)));
    }

    #[test]
    fn duplicate_item_key() {
        let src = "#@IVISIT:DICTSLIDER & P & [200,20,-1,2,10] & d & 0\n\
                   #@IVISIT:DICTSLIDERITEM & A & [0,9,3,1] & k & int & 3\n\
                   #@IVISIT:DICTSLIDERITEM & B & [0,9,3,1] & k & int & 3";
        let e = parse_source(src).unwrap_err();
        assert_eq!((e.line, e.kind), (3, Kind::DuplicateKey("k".into())));
    }

    #[test]
    fn quotation_marks_rejected() {
        for line in [
            "#@IVISIT:LISTSEL & n & [20,5] & ['A',B] & v & -1 & string & B",
            "#@IVISIT:RADIOBUTTON & n & [AA,\"BB\"] & v & AA",
            "#@IVISIT:CHECKBOX & n & [AA,BB] & v & '01'",
        ] {
            let e = one(line).unwrap_err();
            assert!(matches!(e.kind, Kind::QuotationMark(_)), "{line}");
        }
    }

    #[test]
    fn checkbox_length_checked() {
        let e = one("#@IVISIT:CHECKBOX & n & [AA,BB,CC,DD] & v & 011").unwrap_err();
        assert!(matches!(e.kind, Kind::BitstringLength { items: 4, .. }));
    }

    #[test]
    fn listsel_converts_items() {
        let (_, p) = param_spec(one("#@IVISIT:LISTSEL & n & [20,5] & [1,2,3] & v & -1 & int & 2").unwrap());
        assert_eq!(p.value, ParamValue::Int(2));
        assert!(one("#@IVISIT:LISTSEL & n & [20,5] & [A,2] & v & -1 & int & 2").is_err());
    }

    #[test]
    fn text_out_option_forms() {
        for (opt, want) in [
            ("None", alloc::vec![]),
            ("just_left", alloc::vec![Justification::Left]),
            ("[just_right, just_center]", alloc::vec![Justification::Right, Justification::Center]),
        ] {
            let line = alloc::format!("#@IVISIT:TEXT_OUT & n & [20,5] & {opt} & s");
            match one(&line).unwrap() {
                DirectiveRecord::Widget(WidgetSpec::Data { widget, data }) => {
                    let DataWidgetConfig::TextOut(t) = widget.config else { panic!() };
                    assert_eq!(t.options, want);
                    assert_eq!(data.kind, DataKind::Text);
                }
                _ => panic!(),
            }
        }
        assert!(matches!(
            one("#@IVISIT:TEXT_OUT & n & [20,5] & just_up & s").unwrap_err().kind,
            Kind::BadOption(_)
        ));
    }

    #[test]
    fn image_bounds_checked() {
        assert_eq!(
            one("#@IVISIT:IMAGE & n & 1.0 & [255,0] & im & int").unwrap_err().kind,
            Kind::BadImage
        );
        assert_eq!(
            one("#@IVISIT:IMAGE & n & 0 & [0,255] & im & int").unwrap_err().kind,
            Kind::BadImage
        );
    }

    #[test]
    fn dictslider_item_scan_then_parse_error_line() {
        let src = "#@IVISIT:DICTSLIDER & P & [200,20,-1,2,10] & d & 0\n\
                   #@IVISIT:DICTSLIDERITEM & A & [0,9,3] & k & int & 3";
        let d = scan_source(src).unwrap();
        let e = parse_directives(&d).unwrap_err();
        assert_eq!(e.line, 2);
    }
}
