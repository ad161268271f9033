use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::parse::DirectiveRecord;
use super::scan::PREFIX;
use crate::model::*;

fn range(r: &RangeList) -> String {
    format!("[{},{},{},{}]", r.min, r.max, r.nticks, r.increment)
}

fn number(n: Number) -> String {
    match n {
        Number::Int(i) => format!("{i}"),
        Number::Real(r) => format!("{r}"),
    }
}

fn line(keyword: &str, fields: &[String]) -> String {
    let mut s = format!("{PREFIX}{keyword}");
    for f in fields {
        s.push_str(" & ");
        s.push_str(f);
    }
    s
}

fn list(items: &[String]) -> String {
    format!("[{}]", items.join(","))
}

fn text_out_options(opts: &[Justification]) -> String {
    match opts {
        [] => "None".into(),
        [one] => one.as_str().into(),
        many => format!(
            "[{}]",
            many.iter().map(|j| j.as_str()).collect::<Vec<_>>().join(",")
        ),
    }
}

/// Canonical directive lines for one widget. The parameter's current value
/// is written as the initial value.
pub fn serialize_widget(spec: &WidgetSpec) -> Vec<String> {
    match spec {
        WidgetSpec::Param { widget, param } => {
            let name = widget.name.clone();
            let var = widget.target.name.clone();
            let idx = format!("{}", widget.target.list_index);
            let value = format!("{}", param.value);
            match &widget.config {
                ParamWidgetConfig::Slider(s) => alloc::vec![line(
                    "SLIDER",
                    &[
                        name,
                        format!("[{},{}]", s.width, s.height),
                        range(&s.range),
                        var,
                        idx,
                        s.value_type.as_str().into(),
                        value,
                    ],
                )],
                ParamWidgetConfig::DictSlider(d) => {
                    let mut out = alloc::vec![line(
                        "DICTSLIDER",
                        &[
                            name,
                            format!(
                                "[{},{},{},{},{}]",
                                d.width, d.columns, d.rows, d.display_mode, d.font_size
                            ),
                            var,
                            format!("{}", d.init_index),
                        ],
                    )];
                    let group = param.value.as_group();
                    for item in &d.items {
                        let init = group.and_then(|g| g.get(&item.key)).unwrap_or(item.init);
                        out.push(line(
                            "DICTSLIDERITEM",
                            &[
                                item.label.clone(),
                                range(&item.range),
                                item.key.clone(),
                                item.value_type.as_str().into(),
                                number(init),
                            ],
                        ));
                    }
                    out
                }
                ParamWidgetConfig::TextIn(t) => alloc::vec![line(
                    "TEXT_IN",
                    &[name, format!("[{},{}]", t.columns, t.rows), var, idx, value],
                )],
                ParamWidgetConfig::ListSel(l) => alloc::vec![line(
                    "LISTSEL",
                    &[
                        name,
                        format!("[{},{}]", l.columns, l.rows),
                        list(&l.items),
                        var,
                        idx,
                        l.value_type.as_str().into(),
                        value,
                    ],
                )],
                ParamWidgetConfig::Checkbox { items } => {
                    alloc::vec![line("CHECKBOX", &[name, list(items), var, value])]
                }
                ParamWidgetConfig::RadioButton { items } => {
                    alloc::vec![line("RADIOBUTTON", &[name, list(items), var, value])]
                }
                ParamWidgetConfig::Button(b) => alloc::vec![line(
                    "BUTTON",
                    &[name, format!("[{},{}]", b.label_text, b.button_text), var],
                )],
            }
        }
        WidgetSpec::Data { widget, .. } => {
            let name = widget.name.clone();
            let var = widget.target.clone();
            match &widget.config {
                DataWidgetConfig::Image(i) => alloc::vec![line(
                    "IMAGE",
                    &[
                        name,
                        format!("{}", i.scale),
                        format!("[{},{}]", i.lo, i.hi),
                        var,
                        i.value_type.as_str().into(),
                    ],
                )],
                DataWidgetConfig::TextOut(t) => alloc::vec![line(
                    "TEXT_OUT",
                    &[
                        name,
                        format!("[{},{}]", t.columns, t.rows),
                        text_out_options(&t.options),
                        var,
                    ],
                )],
            }
        }
    }
}

/// Canonical source text for a record sequence, one directive per line.
pub fn serialize_records(records: &[DirectiveRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let lines = match r {
            DirectiveRecord::Context(name) => alloc::vec![line("SIMULATION", &[name.clone()])],
            DirectiveRecord::Widget(spec) => serialize_widget(spec),
            DirectiveRecord::DictSliderItem(item) => alloc::vec![line(
                "DICTSLIDERITEM",
                &[
                    item.label.clone(),
                    range(&item.range),
                    item.key.clone(),
                    item.value_type.as_str().into(),
                    number(item.init),
                ],
            )],
        };
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_source;
    use super::*;

    #[test]
    fn canonical_form_is_a_fixpoint() {
        let src = "#@IVISIT:SIMULATION & sim_HelloWorld1\n\
                   #@IVISIT:SLIDER  & name    & [200,1] & [0,9,3,1] & var & -1 & int & 0\n\
                   #@IVISIT:SLIDER & f & [200,1] & [-.5,1e1,3,0.25] & fv & 1 & float & 2.25\n\
                   #@IVISIT:DICTSLIDER  & ParDict  & [200,20,-1,2,10] & dict_par & 0 \n\
                   #@IVISIT:DICTSLIDERITEM & Item1 & [0, 9,3,1] & item1 & int   & 3\n\
                   #@IVISIT:DICTSLIDERITEM & Item2 & [0,30,4,2] & item2 & float & .5\n\
                   #@IVISIT:TEXT_IN & name2 & [20,5] & strvar & -1 & Initial & Text\n\
                   #@IVISIT:LISTSEL & name3 &[20,5] & [A,B,C] & var3 & -1 & string & A\n\
                   #@IVISIT:CHECKBOX & name4 & [AA,BB,CC,DD] & strvar4 & 0110\n\
                   #@IVISIT:RADIOBUTTON & name5 & [AA,BB,CC,DD] & strvar5 & AA\n\
                   #@IVISIT:BUTTON & name6 & [labeltext,buttontext] & strvar6\n\
                   #@IVISIT:IMAGE     & name7 & 1.0    & [0,255]  & img_var & int\n\
                   #@IVISIT:TEXT_OUT & name8 & [20,5] & [just_left,just_right] & strvar8\n";
        let first = parse_source(src).unwrap();
        let text = serialize_records(&first);
        let second = parse_source(&text).unwrap();
        assert_eq!(first, second);
        assert_eq!(serialize_records(&second), text);
        assert!(text.contains("#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & int & 0\n"));
    }
}
