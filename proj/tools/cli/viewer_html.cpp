#include <string>

#include "commands.hpp"

namespace lineage_forge::cli {

namespace {

// Minimal built-in explorer. The lineage document is the only data source;
// closure and neighbor queries are recomputed client-side.
constexpr const char* kPageHead = R"HTML(<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>lineage-forge viewer</title>
<style>
  body { font: 13px/1.4 system-ui, sans-serif; margin: 0; color: #222; }
  header { padding: 8px 12px; background: #f4f4f4; border-bottom: 1px solid #ddd; display: flex; gap: 8px; align-items: center; }
  #canvas { position: relative; padding: 16px; }
  .node { position: absolute; border: 1px solid #888; border-radius: 4px; background: #fff; min-width: 140px; }
  .node h3 { margin: 0; padding: 4px 6px; font-size: 13px; background: #e8eef7; display: flex; justify-content: space-between; }
  .node h3 button { font-size: 11px; }
  .node.base h3 { background: #eee; }
  .col { padding: 2px 6px; border-top: 1px solid #f0f0f0; cursor: default; }
  .col.hl-contributes { background: #ffd6d6; }
  .col.hl-references { background: #d6e4ff; }
  .col.hl-both { background: #ffe2c2; }
  .col.focus { outline: 2px solid #333; }
  svg { position: absolute; left: 0; top: 0; pointer-events: none; }
  #status { color: #888; }
</style>
</head>
<body>
<header>
  <label>Table <input id="table-input" list="table-list" placeholder="type to filter"></label>
  <datalist id="table-list"></datalist>
  <button id="show">Show</button>
  <span id="status"></span>
</header>
<div id="canvas"><svg id="edges"></svg></div>
<script id="lineage-data" type="application/json">)HTML";

constexpr const char* kPageTail = R"HTML(</script>
<script>
(function () {
  const COLORS = { contributes: '#d33', references: '#36c', both: '#e80' };
  let graph = null, out = new Map(), inc = new Map(), visible = new Set(), focus = null;

  function key(r, c) { return r + '.' + c; }
  function split(k) { const i = k.lastIndexOf('.'); return [k.slice(0, i), k.slice(i + 1)]; }

  function init(doc) {
    graph = doc;
    for (const e of doc.edges) {
      if (!out.has(e.src)) out.set(e.src, []);
      if (!inc.has(e.dst)) inc.set(e.dst, []);
      out.get(e.src).push(e);
      inc.get(e.dst).push(e);
    }
    const list = document.getElementById('table-list');
    for (const name of Object.keys(doc.nodes)) {
      const opt = document.createElement('option');
      opt.value = name;
      list.appendChild(opt);
    }
    document.getElementById('show').onclick = () => {
      const name = document.getElementById('table-input').value.trim();
      if (!(name in graph.nodes)) { status('unknown table ' + name); return; }
      visible = new Set([name]);
      focus = null;
      render();
    };
  }

  function status(text) { document.getElementById('status').textContent = text; }

  function neighbors(rel) {
    const found = new Set();
    for (const e of graph.edges) {
      const [s] = split(e.src), [d] = split(e.dst);
      if (s === rel && d !== rel) found.add(d);
      if (d === rel && s !== rel) found.add(s);
    }
    return found;
  }

  function explore(rel) {
    const before = visible.size;
    for (const n of neighbors(rel)) visible.add(n);
    status(visible.size === before ? 'no more neighbors for ' + rel : '');
    render();
  }

  function downstream(seed) {
    const seen = new Set(), queue = [seed];
    while (queue.length) {
      const cur = queue.shift();
      for (const e of out.get(cur) || []) {
        if (e.dst !== seed && !seen.has(e.dst)) { seen.add(e.dst); queue.push(e.dst); }
      }
    }
    return seen;
  }

  function layers() {
    const layer = {};
    const names = [...visible];
    for (const n of names) layer[n] = 0;
    for (let round = 0; round < names.length; ++round) {
      for (const e of graph.edges) {
        const [s] = split(e.src), [d] = split(e.dst);
        if (s !== d && visible.has(s) && visible.has(d) && layer[d] <= layer[s]) layer[d] = layer[s] + 1;
      }
    }
    return layer;
  }

  function render() {
    const canvas = document.getElementById('canvas');
    canvas.querySelectorAll('.node').forEach(n => n.remove());
    const layer = layers();
    const slots = {}, pos = {};
    const highlight = new Map();
    if (focus) {
      const reach = downstream(focus);
      for (const e of graph.edges) {
        if ((e.src === focus || reach.has(e.src)) && reach.has(e.dst)) {
          const prev = highlight.get(e.dst);
          highlight.set(e.dst, prev && prev !== e.kind ? 'both' : e.kind);
        }
      }
    }
    for (const name of [...visible].sort()) {
      const l = layer[name];
      slots[l] = (slots[l] || 0);
      const div = document.createElement('div');
      div.className = 'node ' + graph.nodes[name].kind;
      div.style.left = (20 + l * 240) + 'px';
      div.style.top = (20 + slots[l]) + 'px';
      const h = document.createElement('h3');
      h.textContent = name;
      const btn = document.createElement('button');
      btn.textContent = 'explore';
      btn.onclick = () => explore(name);
      h.appendChild(btn);
      div.appendChild(h);
      for (const col of graph.nodes[name].columns) {
        const k = key(name, col);
        const c = document.createElement('div');
        c.className = 'col';
        if (highlight.has(k)) c.classList.add('hl-' + highlight.get(k));
        if (k === focus) c.classList.add('focus');
        c.textContent = col;
        c.dataset.key = k;
        c.onmouseenter = () => { focus = k; render(); };
        c.onmouseleave = () => { focus = null; render(); };
        div.appendChild(c);
      }
      canvas.appendChild(div);
      slots[l] += 40 + 22 * graph.nodes[name].columns.length;
    }
    drawEdges(highlight);
  }

  function drawEdges(highlight) {
    const svg = document.getElementById('edges');
    const canvas = document.getElementById('canvas');
    svg.setAttribute('width', canvas.scrollWidth);
    svg.setAttribute('height', canvas.scrollHeight);
    svg.innerHTML = '';
    const base = canvas.getBoundingClientRect();
    const at = {};
    canvas.querySelectorAll('.col').forEach(el => { at[el.dataset.key] = el.getBoundingClientRect(); });
    for (const e of graph.edges) {
      const a = at[e.src], b = at[e.dst];
      if (!a || !b) continue;
      const lit = focus && highlight.has(e.dst) && (e.src === focus || highlight.has(e.src));
      const path = document.createElementNS('http://www.w3.org/2000/svg', 'path');
      const x1 = a.right - base.left, y1 = a.top + a.height / 2 - base.top;
      const x2 = b.left - base.left, y2 = b.top + b.height / 2 - base.top;
      path.setAttribute('d', `M${x1},${y1} C${x1 + 60},${y1} ${x2 - 60},${y2} ${x2},${y2}`);
      path.setAttribute('fill', 'none');
      path.setAttribute('stroke', lit ? COLORS[e.kind] : '#ccc');
      path.setAttribute('stroke-width', lit ? 2 : 1);
      svg.appendChild(path);
    }
  }

  const inline = JSON.parse(document.getElementById('lineage-data').textContent);
  if (location.protocol.startsWith('http')) {
    fetch('/api/lineage').then(r => r.json()).then(init).catch(() => init(inline));
  } else {
    init(inline);
  }
})();
</script>
</body>
</html>
)HTML";

}  // namespace

std::string render_viewer_html(const std::string& lineage_json) {
  std::string embedded;
  embedded.reserve(lineage_json.size());
  for (std::size_t i = 0; i < lineage_json.size(); ++i) {
    // keep `</script>` inside string values from closing the data block
    if (lineage_json[i] == '<' && i + 1 < lineage_json.size() && lineage_json[i + 1] == '/') {
      embedded += "<\\/";
      ++i;
    } else {
      embedded += lineage_json[i];
    }
  }
  return std::string(kPageHead) + embedded + kPageTail;
}

}  // namespace lineage_forge::cli
