use serde_json::Value;
use spherebraid_web::{braid_equal, braid_order, classify, group_lattice};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn order_and_equality() {
    assert_eq!(parse(braid_order(5, "a0"))["order"], "10");
    assert_eq!(parse(braid_order(4, "1 1"))["order"], "infinite");
    assert_eq!(parse(braid_equal(4, "D^2", "a0^4"))["equal"], true);
    assert_eq!(parse(braid_equal(4, "1", "2"))["equal"], false);
}

#[test]
fn classes_for_n() {
    let v = parse(classify(6, false));
    let shapes: Vec<&str> = v["classes"].as_array().unwrap().iter().map(|c| c["shape"].as_str().unwrap()).collect();
    assert!(shapes.contains(&"O* *_T* O*"));
    assert!(!parse(classify(6, true))["classes"].as_array().unwrap().is_empty());
}

#[test]
fn lattice_of_binary_octahedral() {
    let v = parse(group_lattice("O*"));
    assert_eq!(v["order"], 48);
    let maximal: Vec<&str> = v["maximal"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(maximal, ["Dic12", "Q16", "T*"]);
}

#[test]
fn errors_are_json() {
    assert!(parse(braid_order(2, "1")).get("error").is_some());
    assert!(parse(braid_order(4, "1 ) 2")).get("error").is_some());
    assert!(parse(group_lattice("Q7")).get("error").is_some());
    assert!(parse(classify(3, false)).get("error").is_some());
}
