/** Exploratory view: the directly-follows process map. Nodes are laid
 * out on a circle (deterministic: sorted by label), edge widths scale
 * with transition frequency. */

import { clear, el, svgEl } from '../dom.js';
import type { ProcessGraphDto } from '../types.js';

const SIZE = 560;
const RADIUS = 220;

export function renderProcessMap(
  container: Element,
  graph: ProcessGraphDto,
  onThreshold: (value: number) => void,
): void {
  clear(container);
  container.append(el('h2', {}, ['Process map']));

  const slider = el('input', {
    type: 'range',
    min: '0',
    max: '1',
    step: '0.05',
    value: String(graph.threshold),
    class: 'threshold-slider',
  });
  slider.addEventListener('change', () => onThreshold(Number(slider.value)));
  container.append(
    el('label', { class: 'slider-row' }, [
      `transition mass ${graph.threshold.toFixed(2)} `,
      slider,
    ]),
  );

  const labels = graph.nodes.map((n) => n.activity).sort();
  const position = new Map<string, { x: number; y: number }>();
  labels.forEach((label, i) => {
    const angle = (2 * Math.PI * i) / Math.max(1, labels.length) - Math.PI / 2;
    position.set(label, {
      x: SIZE / 2 + RADIUS * Math.cos(angle),
      y: SIZE / 2 + RADIUS * Math.sin(angle),
    });
  });

  const svg = svgEl('svg', { viewBox: `0 0 ${SIZE} ${SIZE}`, class: 'chart process-map' });
  const maxFrequency = Math.max(1, ...graph.edges.map((e) => e.frequency));
  for (const edge of graph.edges) {
    const from = position.get(edge.source)!;
    const to = position.get(edge.target)!;
    svg.append(
      svgEl('line', {
        x1: String(from.x),
        y1: String(from.y),
        x2: String(to.x),
        y2: String(to.y),
        class: 'edge',
        'stroke-width': String(1 + 5 * (edge.frequency / maxFrequency)),
        'data-frequency': String(edge.frequency),
        'data-source': edge.source,
        'data-target': edge.target,
      }),
    );
  }
  for (const node of graph.nodes) {
    const at = position.get(node.activity)!;
    svg.append(
      svgEl('circle', {
        cx: String(at.x),
        cy: String(at.y),
        r: '7',
        class: 'node',
        'data-activity': node.activity,
        'data-frequency': String(node.frequency),
      }),
    );
    svg.append(
      svgEl('text', { x: String(at.x), y: String(at.y - 11), class: 'node-label' }, [
        `${node.activity} (${node.frequency})`,
      ]),
    );
  }
  container.append(svg);
  container.append(
    el('p', { class: 'caption' }, [
      `${graph.nodes.length} activities, ${graph.edges.length} transitions`,
    ]),
  );
}
