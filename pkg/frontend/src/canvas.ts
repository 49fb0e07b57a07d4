/**
 * Topology canvas model: node positions, edges, selection.
 *
 * Positions are cosmetic and live only in the browser (injected
 * storage); the node/edge set always mirrors the served topology
 * document exactly. Layout is deterministic: devices sit on an outer
 * ring in document order, segments on an inner ring, so two students
 * looking at the same lab see the same picture until they drag things.
 */

import { TopologyDoc } from "./topodoc.js";

export interface Point {
  x: number;
  y: number;
}

export interface CanvasNode extends Point {
  id: string;
  label: string;
  kind: "router" | "switch" | "host" | "segment";
}

export interface CanvasEdge {
  from: string; // device node id
  to: string; // segment node id
  label: string; // interface name
}

export interface PositionStore {
  load(key: string): Record<string, Point> | null;
  save(key: string, positions: Record<string, Point>): void;
}

export const nullStore: PositionStore = {
  load: () => null,
  save: () => undefined,
};

/** Backed by window.localStorage when available. */
export function browserStore(storage: Storage): PositionStore {
  return {
    load(key) {
      const raw = storage.getItem(key);
      if (!raw) return null;
      try {
        return JSON.parse(raw) as Record<string, Point>;
      } catch {
        return null;
      }
    },
    save(key, positions) {
      storage.setItem(key, JSON.stringify(positions));
    },
  };
}

export class CanvasModel {
  readonly nodes: CanvasNode[] = [];
  readonly edges: CanvasEdge[] = [];
  selected: string | null = null;

  constructor(
    doc: TopologyDoc,
    readonly width = 900,
    readonly height = 640,
    private store: PositionStore = nullStore,
    private storeKey = "netlab-layout",
  ) {
    const cx = width / 2;
    const cy = height / 2;
    const deviceRadius = Math.min(cx, cy) - 60;
    const segmentRadius = deviceRadius * 0.55;

    doc.devices.forEach((device, i) => {
      const angle = (2 * Math.PI * i) / Math.max(doc.devices.length, 1) - Math.PI / 2;
      this.nodes.push({
        id: `device:${device.name}`,
        label: device.name,
        kind: device.kind,
        x: Math.round(cx + deviceRadius * Math.cos(angle)),
        y: Math.round(cy + deviceRadius * Math.sin(angle)),
      });
    });
    doc.segments.forEach((segment, i) => {
      const angle = (2 * Math.PI * i) / Math.max(doc.segments.length, 1) - Math.PI / 2;
      this.nodes.push({
        id: `segment:${segment.name}`,
        label: segment.vlan === undefined ? segment.name : `${segment.name} (vlan ${segment.vlan})`,
        kind: "segment",
        x: Math.round(cx + segmentRadius * Math.cos(angle)),
        y: Math.round(cy + segmentRadius * Math.sin(angle)),
      });
    });
    for (const attachment of doc.attachments) {
      this.edges.push({
        from: `device:${attachment.device}`,
        to: `segment:${attachment.segment}`,
        label: attachment.iface,
      });
    }

    const saved = this.store.load(this.storeKey);
    if (saved) {
      for (const node of this.nodes) {
        const p = saved[node.id];
        if (p) {
          node.x = p.x;
          node.y = p.y;
        }
      }
    }
  }

  node(id: string): CanvasNode | undefined {
    return this.nodes.find((n) => n.id === id);
  }

  moveNode(id: string, x: number, y: number): void {
    const node = this.node(id);
    if (!node) return;
    node.x = x;
    node.y = y;
    const positions: Record<string, Point> = {};
    for (const n of this.nodes) positions[n.id] = { x: n.x, y: n.y };
    this.store.save(this.storeKey, positions);
  }

  select(id: string | null): void {
    this.selected = id;
  }

  /** Topmost node within `radius` of the point, devices first. */
  hitTest(x: number, y: number, radius = 24): CanvasNode | undefined {
    const within = this.nodes.filter((n) => (n.x - x) ** 2 + (n.y - y) ** 2 <= radius ** 2);
    within.sort((a, b) => {
      const aDevice = a.kind === "segment" ? 1 : 0;
      const bDevice = b.kind === "segment" ? 1 : 0;
      return aDevice - bDevice;
    });
    return within[0];
  }
}
