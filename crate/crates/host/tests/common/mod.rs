#![allow(dead_code)]

use workbench_core::directive::{merge_into_collection, parse_source, MergeOptions};
use workbench_core::model::{CommentWidgetDef, Geometry, WidgetCollection, DEFAULT_CONTEXT};

/// One widget of every kind.
pub const ALL_KINDS: &str = "\
#@IVISIT:SIMULATION & every_kind
#@IVISIT:SLIDER  & name    & [200,1] & [0,9,3,1] & var & -1 & int & 0
#@IVISIT:DICTSLIDER  & ParDict  & [200,20,-1,2,10] & dict_par & 0
#@IVISIT:DICTSLIDERITEM & Item1 & [0, 9,3,1] & item1 & int   & 3
#@IVISIT:DICTSLIDERITEM & Item2 & [0,30,4,2] & item2 & float & .5
#@IVISIT:TEXT_IN & name_t     & [20,5] & strvar_t & -1 & InitialText
#@IVISIT:LISTSEL & name_l &[20,5] & [A,B,C] & var_l & -1 & string & A
#@IVISIT:CHECKBOX & name_c & [AA,BB,CC,DD] & strvar_c & 0110
#@IVISIT:RADIOBUTTON & name_r & [AA,BB,CC,DD] & strvar_r & AA
#@IVISIT:BUTTON & name_b & [labeltext,buttontext] & strvar_b
#@IVISIT:IMAGE     & name_i & 1.0    & [0,255]  & img_var & int
#@IVISIT:TEXT_OUT & name_o & [20,5] & None & strvar_o
";

pub fn collection_from(source: &str) -> WidgetCollection {
    let records = parse_source(source).expect("fixture parses");
    let (coll, _) = merge_into_collection(&records, &WidgetCollection::new(DEFAULT_CONTEXT), MergeOptions::default())
        .expect("fixture merges");
    coll
}

/// Every widget kind plus a comment, with non-default geometry.
pub fn all_kinds_collection() -> WidgetCollection {
    let mut coll = collection_from(ALL_KINDS);
    for (i, w) in coll.pwidgets.iter_mut().enumerate() {
        w.geometry = Geometry::new(10 * i as i32, 20 + i as i32);
    }
    for (i, w) in coll.dwidgets.iter_mut().enumerate() {
        w.geometry = Geometry::new(300, 40 * i as i32);
    }
    coll.comments.push(CommentWidgetDef {
        name: "note".into(),
        geometry: Geometry::new(5, 500),
        body: "drag the sliders\nthen press run".into(),
    });
    coll
}
