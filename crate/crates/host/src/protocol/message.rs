//! JSON text messages. Every message is an object with a `type` field.

use serde::Deserialize;
use serde_json::{json, Value};
use workbench_core::automaton::{PointerEvent, PointerKind};
use workbench_core::model::ParamValue;
use workbench_core::widget::UiValue;

use crate::engine::runner::Control;
use crate::engine::{Command, Frame, Input, Layout, WidgetEntry};

/// A message from a UI client.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Action {
        cmd: String,
    },
    SetParam {
        widget_id: u32,
        value: Value,
    },
    Pointer {
        widget_id: u32,
        kind: String,
        #[serde(default = "left_button")]
        button: u8,
        x_px: f64,
        y_px: f64,
    },
    SetGeometry {
        widget_id: u32,
        x: i32,
        y: i32,
    },
    SelectContext {
        name: String,
    },
    CopyContext {
        name: String,
    },
}

fn left_button() -> u8 {
    1
}

/// A client message that could not be turned into an engine input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejected {
    pub code: &'static str,
    pub detail: String,
}

impl Rejected {
    fn bad(detail: impl Into<String>) -> Self {
        Self {
            code: "bad_message",
            detail: detail.into(),
        }
    }

    pub fn to_json(&self) -> String {
        error_json(self.code, &self.detail)
    }
}

impl ClientMessage {
    pub fn parse(text: &str) -> Result<Self, Rejected> {
        serde_json::from_str(text).map_err(|e| Rejected::bad(e.to_string()))
    }

    pub fn into_control(self) -> Result<Control, Rejected> {
        Ok(match self {
            ClientMessage::Action { cmd } => match cmd.parse::<Command>() {
                Ok(c) => Control::Command(c),
                Err(e) => {
                    return Err(Rejected {
                        code: e.code(),
                        detail: e.to_string(),
                    })
                }
            },
            ClientMessage::SetParam { widget_id, value } => Control::Input(Input::Param {
                widget_id,
                value: ui_value_from_json(&value).ok_or_else(|| Rejected::bad(format!("bad value {value}")))?,
            }),
            ClientMessage::Pointer {
                widget_id,
                kind,
                button,
                x_px,
                y_px,
            } => {
                let kind = PointerKind::parse(&kind).ok_or_else(|| Rejected::bad(format!("bad pointer kind `{kind}`")))?;
                if !x_px.is_finite() || !y_px.is_finite() {
                    return Err(Rejected::bad("non-finite pointer position"));
                }
                Control::Input(Input::Pointer {
                    widget_id,
                    event: PointerEvent::new(kind, button, x_px, y_px),
                })
            }
            ClientMessage::SetGeometry { widget_id, x, y } => Control::Input(Input::Geometry { widget_id, x, y }),
            ClientMessage::SelectContext { name } => Control::SelectContext(name),
            ClientMessage::CopyContext { name } => Control::CopyContext(name),
        })
    }
}

/// Numbers go to sliders, strings to text-like widgets, `{key, value}` to
/// dictsliders; `true`/`null`/`{}` are button clicks.
pub fn ui_value_from_json(v: &Value) -> Option<UiValue> {
    match v {
        Value::Number(n) => n.as_f64().map(UiValue::Number),
        Value::String(s) => Some(UiValue::Text(s.clone())),
        Value::Bool(_) | Value::Null => Some(UiValue::Click),
        Value::Object(m) if m.is_empty() => Some(UiValue::Click),
        Value::Object(m) => {
            let key = m.get("key")?.as_str()?.to_string();
            let value = m.get("value")?.as_f64()?;
            Some(UiValue::Keyed { key, value })
        }
        Value::Array(_) => None,
    }
}

pub fn value_to_json(v: &ParamValue) -> Value {
    match v {
        ParamValue::Int(i) => json!(i),
        ParamValue::Real(r) => json!(r),
        ParamValue::Text(t) => json!(t),
        ParamValue::Group(g) => Value::Array(
            g.iter()
                .map(|(k, n)| json!({"key": k, "value": value_to_json(&n.into())}))
                .collect(),
        ),
    }
}

pub fn layout_json(layout: &Layout) -> String {
    let widgets: Vec<Value> = layout
        .widgets
        .iter()
        .map(|w| match &w.entry {
            WidgetEntry::Param { def, value } => json!({
                "id": w.id,
                "table": "parameter",
                "kind": def.kind().keyword(),
                "name": def.name,
                "x": def.geometry.x,
                "y": def.geometry.y,
                "config": def.config,
                "target": def.target.name,
                "list_index": def.target.list_index,
                "value": value.as_ref().map(value_to_json),
                "bound": w.bound,
            }),
            WidgetEntry::Data(def) => json!({
                "id": w.id,
                "table": "data",
                "kind": def.kind().keyword(),
                "name": def.name,
                "x": def.geometry.x,
                "y": def.geometry.y,
                "config": def.config,
                "target": def.target,
                "bound": w.bound,
            }),
            WidgetEntry::Comment(def) => json!({
                "id": w.id,
                "table": "comment",
                "kind": "COMMENT",
                "name": def.name,
                "x": def.geometry.x,
                "y": def.geometry.y,
                "body": def.body,
                "bound": w.bound,
            }),
        })
        .collect();
    json!({
        "type": "layout",
        "context": layout.context,
        "contexts": layout.contexts,
        "step": layout.step,
        "running": layout.running,
        "widgets": widgets,
    })
    .to_string()
}

fn values_array(values: &[(u32, ParamValue)]) -> Vec<Value> {
    values
        .iter()
        .map(|(id, v)| json!({"widget_id": id, "value": value_to_json(v)}))
        .collect()
}

pub fn frame_meta_json(frame: &Frame) -> String {
    json!({
        "type": "frame_meta",
        "step": frame.step,
        "running": frame.running,
        "texts": frame.texts.iter().map(|(id, t)| json!({"widget_id": id, "text": t})).collect::<Vec<_>>(),
        "values": values_array(&frame.values),
        "images": frame.images.iter().map(|(id, _)| *id).collect::<Vec<_>>(),
    })
    .to_string()
}

pub fn values_json(step: u64, values: &[(u32, ParamValue)]) -> String {
    json!({"type": "values", "step": step, "values": values_array(values)}).to_string()
}

pub fn error_json(code: &str, detail: &str) -> String {
    json!({"type": "error", "code": code, "detail": detail}).to_string()
}

pub fn report_json(text: &str) -> String {
    json!({"type": "report", "text": text}).to_string()
}

pub fn quit_json() -> String {
    json!({"type": "quit"}).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use workbench_core::model::{KeyedGroup, Number};

    #[test]
    fn client_messages_decode() {
        let m = ClientMessage::parse(r#"{"type":"action","cmd":"run"}"#).unwrap();
        assert_eq!(m.into_control().unwrap(), Control::Command(Command::Run));
        let m = ClientMessage::parse(r#"{"type":"set_param","widget_id":2,"value":{"key":"tau","value":12.5}}"#).unwrap();
        assert_eq!(
            m.into_control().unwrap(),
            Control::Input(Input::Param {
                widget_id: 2,
                value: UiValue::Keyed {
                    key: "tau".into(),
                    value: 12.5
                }
            })
        );
        let m = ClientMessage::parse(r#"{"type":"pointer","widget_id":4,"kind":"press","button":1,"x_px":3,"y_px":4}"#)
            .unwrap();
        assert!(matches!(m.into_control().unwrap(), Control::Input(Input::Pointer { widget_id: 4, .. })));
    }

    #[test]
    fn malformed_messages_are_rejected() {
        assert_eq!(ClientMessage::parse("not json").unwrap_err().code, "bad_message");
        assert_eq!(ClientMessage::parse(r#"{"type":"teleport"}"#).unwrap_err().code, "bad_message");
        let m = ClientMessage::parse(r#"{"type":"pointer","widget_id":4,"kind":"hover","x_px":3,"y_px":4}"#).unwrap();
        assert_eq!(m.into_control().unwrap_err().code, "bad_message");
        let m = ClientMessage::parse(r#"{"type":"action","cmd":"jump"}"#).unwrap();
        assert_eq!(m.into_control().unwrap_err().code, "bad_command");
    }

    #[test]
    fn group_values_keep_order() {
        let g: KeyedGroup = [("b".to_string(), Number::Int(2)), ("a".to_string(), Number::Real(0.5))]
            .into_iter()
            .collect();
        let v = value_to_json(&ParamValue::Group(g));
        assert_eq!(v, json!([{"key": "b", "value": 2}, {"key": "a", "value": 0.5}]));
    }
}
