//! Plot-ready graph exports: GraphML and DOT, with the community label as a
//! node attribute and the correlation as edge weight.

use super::{Partition, WeightedGraph};

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

/// GraphML document for the graph; node `community` attribute included when
/// a partition is given.
pub fn to_graphml(graph: &WeightedGraph, partition: Option<&Partition>) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    if partition.is_some() {
        out.push_str(
            "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n",
        );
    }
    out.push_str(
        "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n",
    );
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for (idx, node) in graph.nodes().iter().enumerate() {
        let id = xml_escape(node);
        match partition {
            Some(p) => {
                out.push_str(&format!(
                    "    <node id=\"{id}\"><data key=\"community\">{}</data></node>\n",
                    p.labels()[idx]
                ));
            }
            None => out.push_str(&format!("    <node id=\"{id}\"/>\n")),
        }
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data></edge>\n",
            xml_escape(&graph.nodes()[e.u]),
            xml_escape(&graph.nodes()[e.v]),
            e.weight
        ));
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT document; community labels become node attributes.
pub fn to_dot(graph: &WeightedGraph, partition: Option<&Partition>) -> String {
    let mut out = String::from("graph agora {\n");
    for (idx, node) in graph.nodes().iter().enumerate() {
        let id = dot_escape(node);
        match partition {
            Some(p) => out.push_str(&format!(
                "  \"{id}\" [community={}];\n",
                p.labels()[idx]
            )),
            None => out.push_str(&format!("  \"{id}\";\n")),
        }
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\" [weight={}];\n",
            dot_escape(&graph.nodes()[e.u]),
            dot_escape(&graph.nodes()[e.v]),
            e.weight
        ));
    }
    out.push_str("}\n");
    out
}
