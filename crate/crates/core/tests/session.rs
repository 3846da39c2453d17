use adaptabar::session::profiles::profile_path;
use adaptabar::{
    parse_trace, replay_trace, save_profile, DragSource, EventKind, ProfileStore, Session, SessionDefs,
    TraceEvent, UserId,
};

const DEFS: &str = r#"{
  "toolbars": [
    {
      "toolbar_id": "main",
      "config": { "available_width": 100, "spacing": 0, "display_mode": "icon_only" },
      "controls": [
        { "id": "a", "action": "act.a", "label": "Alpha", "icon_width": 40, "label_width": 20, "base_weight": 3 },
        { "id": "b", "action": "act.b", "label": "Beta",  "icon_width": 40, "label_width": 20, "base_weight": 2 },
        { "id": "c", "action": "act.c", "label": "Gamma", "icon_width": 40, "label_width": 20, "base_weight": 1 },
        { "id": "off", "action": "act.off", "label": "Off", "icon_width": 40, "label_width": 0, "base_weight": 0, "enabled": false }
      ]
    },
    { "toolbar_id": "left",  "config": { "spacing": 0, "display_mode": "icon_only" },
      "controls": [ { "id": "l1", "action": "l1", "label": "L1", "icon_width": 30, "label_width": 0, "base_weight": 1 },
                    { "id": "l2", "action": "l2", "label": "L2", "icon_width": 30, "label_width": 0, "base_weight": 1 } ] },
    { "toolbar_id": "right", "config": { "spacing": 0, "display_mode": "icon_only" },
      "controls": [ { "id": "r1", "action": "r1", "label": "R1", "icon_width": 30, "label_width": 0, "base_weight": 1 } ] }
  ],
  "stack": { "members": ["left", "right"], "selected": "left" },
  "sections": { "widths": [60, 40], "toolbars": ["left", "right"] },
  "palettes": { "static": ["select"], "registry": { "m1": ["x", "y"], "m2": ["z"] }, "initial_context": "m1" },
  "chain": { "context": "m1", "length": 2, "options": {
      "m1": { "": ["daily", "weekly"], "daily": ["summary", "detail"], "weekly": ["summary"] },
      "m2": { "": ["daily"], "daily": ["detail"] } } }
}"#;

fn defs() -> SessionDefs {
    SessionDefs::from_json(DEFS).unwrap()
}

fn ev(seq: u64, kind: EventKind) -> TraceEvent {
    TraceEvent::new(seq, kind)
}

fn activate(seq: u64, id: &str) -> TraceEvent {
    ev(seq, EventKind::Activate { control: id.into(), toolbar: None })
}

fn replay(trace: &[TraceEvent]) -> adaptabar::SessionSnapshot {
    replay_trace(trace, defs(), ProfileStore::in_memory(), "alice".into()).unwrap().0
}

fn shown(s: &adaptabar::SessionSnapshot, toolbar: usize) -> Vec<String> {
    s.toolbars[toolbar].layout.displayed.iter().map(|d| d.id.to_string()).collect()
}

#[test]
fn empty_trace_is_initial_state() {
    let s = replay(&[]);
    assert_eq!(s.metrics, Default::default());
    assert_eq!(s.seq, None);
    assert_eq!(shown(&s, 0), ["a", "b"]);
    assert_eq!(s.toolbars[0].layout.well.iter().map(|w| w.as_str()).collect::<Vec<_>>(), ["c", "off"]);
    assert_eq!(s.profile.total_activations, 0);
    assert!(s.errors.is_empty());
}

#[test]
fn bar_activations_accumulate_without_churn() {
    let trace: Vec<_> = (1..=5).map(|i| activate(i, "a")).collect();
    let (s, store) = replay_trace(&trace, defs(), ProfileStore::in_memory(), "alice".into()).unwrap();
    assert_eq!(store.get(&"alice".into()).unwrap().count("a"), 5);
    assert_eq!(s.metrics.bar_activations, 5);
    assert_eq!(s.metrics.churn, 0);
    assert_eq!(s.profile.total_activations, 5);
}

#[test]
fn well_activation_promotes_control() {
    let trace = [activate(1, "c"), ev(2, EventKind::Resize { width: 100, toolbar: None })];
    let s = replay(&trace);
    assert_eq!(shown(&s, 0), ["a", "c"]);
    assert_eq!(s.metrics.well_activations, 1);
    assert_eq!(s.metrics.churn, 1);
    assert_eq!(s.toolbars[0].mru.as_ref().unwrap().as_str(), "c");
}

#[test]
fn disabled_activation_is_a_counted_noop() {
    let s = replay(&[activate(1, "off")]);
    assert_eq!(s.metrics.disabled_activations, 1);
    assert_eq!(s.profile.total_activations, 0);
    assert!(s.events.is_empty());
}

#[test]
fn activation_dispatches_bound_action() {
    let s = replay(&[activate(1, "b")]);
    assert_eq!(
        s.events[0],
        adaptabar::session::EngineEvent::Dispatched {
            toolbar: "main".into(),
            control: "b".into(),
            action: "act.b".into()
        }
    );
}

#[test]
fn errors_are_logged_and_replay_continues() {
    let trace = [
        activate(1, "ghost"),
        ev(2, EventKind::ChainSet { position: 0, option: "yearly".into() }),
        ev(3, EventKind::StackSelect { toolbar: "nope".into() }),
        ev(4, EventKind::DragBoundary { boundary: 5, delta: 1 }),
        ev(5, EventKind::SetContext { module: "m9".into() }),
        activate(6, "a"),
    ];
    let s = replay(&trace);
    let seqs: Vec<u64> = s.errors.iter().map(|e| e.seq).collect();
    assert_eq!(seqs, [1, 2, 3, 4, 5]);
    assert_eq!(s.metrics.bar_activations, 1);
    assert_eq!(s.seq, Some(6));
}

#[test]
fn failed_context_switch_leaves_chain_untouched() {
    let trace = [
        ev(1, EventKind::ChainSet { position: 0, option: "daily".into() }),
        ev(2, EventKind::SetContext { module: "m9".into() }),
    ];
    let s = replay(&trace);
    let chain = s.chain.unwrap();
    assert_eq!(chain.context, "m1");
    assert_eq!(chain.values[0].as_deref(), Some("daily"));
}

#[test]
fn context_switch_moves_palette_and_chain() {
    let trace = [
        ev(1, EventKind::ChainSet { position: 0, option: "daily".into() }),
        ev(2, EventKind::ChainSet { position: 1, option: "summary".into() }),
        ev(3, EventKind::SetContext { module: "m2".into() }),
    ];
    let s = replay(&trace);
    let p = s.palettes.unwrap();
    assert_eq!(p.current_context, "m2");
    assert_eq!(p.dynamic_palette.iter().map(|c| c.as_str()).collect::<Vec<_>>(), ["z"]);
    let chain = s.chain.unwrap();
    assert_eq!(chain.values, [Some("daily".to_string()), None]);
    assert_eq!(chain.options[1], ["detail"]);
}

#[test]
fn stack_selection_emits_paired_events() {
    let s = replay(&[ev(1, EventKind::StackSelect { toolbar: "right".into() })]);
    assert_eq!(s.stack.unwrap().selected.unwrap().as_str(), "right");
    assert_eq!(s.events.len(), 4);
}

#[test]
fn slide_panel_follows_pointer_and_ticks() {
    let trace = [
        ev(1, EventKind::PointerMove { distance: 5 }),
        ev(2, EventKind::Tick { ms: 100 }),
        ev(3, EventKind::Tick { ms: 50 }),
    ];
    let s = replay(&trace);
    assert!(s.slide_panel.is_visible());
    assert_eq!(
        s.events,
        [adaptabar::session::EngineEvent::Slide { event: adaptabar::SlideEvent::BecameVisible }]
    );
}

#[test]
fn boundary_drag_refits_only_adjacent_sections() {
    let mut session = Session::new(defs(), ProfileStore::in_memory(), "alice".into()).unwrap();
    assert_eq!(session.toolbar("left").unwrap().layout.displayed.len(), 2);
    let main_before = session.toolbar("main").unwrap().layout.clone();
    session.apply(&ev(1, EventKind::DragBoundary { boundary: 0, delta: -20 })).unwrap();
    assert_eq!(session.section_row().unwrap().widths, [40, 60]);
    let left = &session.toolbar("left").unwrap().layout;
    assert_eq!(left.displayed.len(), 1);
    assert_eq!(left.well.len(), 1);
    assert_eq!(left.available_width, 40);
    assert_eq!(session.toolbar("right").unwrap().layout.available_width, 60);
    assert_eq!(session.toolbar("main").unwrap().layout, main_before);
    assert_eq!(session.metrics().churn, 1);
}

#[test]
fn menu_drag_then_bar_activation_saves_clicks() {
    let source = DragSource::MenuItem {
        path: vec!["Format".into(), "Font".into(), "Bold".into()],
        action: "fmt.bold".into(),
    };
    let trace = [
        ev(1, EventKind::Resize { width: 400, toolbar: None }),
        ev(2, EventKind::DragAdd { source: source.clone(), position: 1, toolbar: None }),
        activate(3, "fmt.bold"),
        activate(4, "fmt.bold"),
        ev(5, EventKind::DragAdd { source, position: 0, toolbar: None }),
    ];
    let s = replay(&trace);
    assert!(shown(&s, 0).contains(&"fmt.bold".to_string()));
    assert_eq!(s.metrics.bar_activations, 2);
    assert_eq!(s.metrics.clicks_saved, 4);
    assert_eq!(s.errors.len(), 1, "second drop of the same action is rejected");
    assert_eq!(s.toolbars[0].qc[1].control.as_str(), "fmt.bold");
}

#[test]
fn qc_toggle_and_remove_through_trace() {
    let trace = [
        ev(1, EventKind::QcToggle { id: "a".into(), toolbar: None }),
        ev(2, EventKind::RemoveControl { id: "c".into(), toolbar: None }),
    ];
    let s = replay(&trace);
    let t = &s.toolbars[0];
    assert!(t.layout.user_hidden.contains("a"));
    assert!(!t.qc[0].selected);
    assert_eq!(t.qc.len(), 3);
    assert_eq!(shown(&s, 0), ["b", "off"]);
}

#[test]
fn switch_user_isolates_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let mut bob = adaptabar::UsageProfile::new("bob".into());
    bob.record_activation(&"c".into());
    save_profile(dir.path(), &bob).unwrap();
    let bob_bytes = std::fs::read(profile_path(dir.path(), &"bob".into())).unwrap();

    let trace = [
        activate(1, "a"),
        ev(2, EventKind::SwitchUser { user: "carol".into() }),
        activate(3, "b"),
        activate(4, "b"),
        ev(5, EventKind::SwitchUser { user: "bob".into() }),
    ];
    let (s, mut store) = replay_trace(&trace, defs(), ProfileStore::with_dir(dir.path()), "alice".into()).unwrap();
    assert_eq!(store.get(&"alice".into()).unwrap().count("a"), 1);
    assert_eq!(store.get(&"alice".into()).unwrap().count("b"), 0);
    assert_eq!(store.get(&"carol".into()).unwrap().count("b"), 2);
    assert_eq!(store.get(&"bob".into()).unwrap(), &bob);
    assert_eq!(s.profile.user_id.as_str(), "bob");
    // Bob's most recent activation is forced back onto the bar.
    assert_eq!(shown(&s, 0), ["a", "c"]);

    store.save_all().unwrap();
    assert_eq!(std::fs::read(profile_path(dir.path(), &"bob".into())).unwrap(), bob_bytes);
}

#[test]
fn unreadable_profile_aborts_replay() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(profile_path(dir.path(), &"bob".into()), "{\"user_id\":").unwrap();
    let trace = [ev(1, EventKind::SwitchUser { user: "bob".into() })];
    let err = replay_trace(&trace, defs(), ProfileStore::with_dir(dir.path()), "alice".into()).unwrap_err();
    assert!(matches!(err, adaptabar::Error::ProfileParse { .. }));
}

#[test]
fn non_increasing_seq_is_rejected_by_session() {
    let mut session = Session::new(defs(), ProfileStore::in_memory(), UserId::from("u")).unwrap();
    session.apply(&activate(3, "a")).unwrap();
    assert!(matches!(
        session.apply(&activate(3, "a")),
        Err(adaptabar::Error::SeqOrder { seq: 3, previous: 3 })
    ));
    assert_eq!(session.metrics().bar_activations, 1);
}

#[test]
fn replay_from_jsonl_text_is_byte_stable() {
    let text = "\
{\"seq\":1,\"t\":\"activate\",\"control\":\"c\"}
{\"seq\":2,\"t\":\"pointer_move\",\"distance\":3}
{\"seq\":3,\"t\":\"tick\",\"ms\":50}
{\"seq\":4,\"t\":\"resize\",\"width\":57}
{\"seq\":5,\"t\":\"chain_set\",\"position\":0,\"option\":\"weekly\"}
{\"seq\":6,\"t\":\"toggle_highlight\"}
";
    let trace = parse_trace(text).unwrap();
    let a = replay(&trace).to_canonical_json();
    let b = replay(&trace).to_canonical_json();
    assert_eq!(a, b);
    assert!(a.contains("\"progress\":\"1/3\""));
    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["chain"]["highlight"], true);
}
