/**
 * Reader for the topology document served by the lab service.
 *
 * Display plumbing only: the UI needs device names/kinds, segments and
 * attachments to draw the diagram. All routing truth stays server-side.
 */

export interface TopoDevice {
  name: string;
  kind: "router" | "switch" | "host";
  interfaces: string[];
}

export interface TopoSegment {
  name: string;
  vlan?: number;
}

export interface TopoAttachment {
  device: string;
  iface: string;
  segment: string;
}

export interface TopologyDoc {
  devices: TopoDevice[];
  segments: TopoSegment[];
  attachments: TopoAttachment[];
}

export function parseTopology(text: string): TopologyDoc {
  const devices: TopoDevice[] = [];
  const segments: TopoSegment[] = [];
  const attachments: TopoAttachment[] = [];
  let current: TopoDevice | null = null;

  for (const raw of text.split("\n")) {
    const line = raw.split("#", 1)[0].trim();
    if (!line) continue;
    const words = line.split(/\s+/);
    switch (words[0]) {
      case "device":
        current = { name: words[1], kind: words[2] as TopoDevice["kind"], interfaces: [] };
        devices.push(current);
        break;
      case "interface":
        current?.interfaces.push(words[1]);
        break;
      case "segment": {
        const segment: TopoSegment = { name: words[1] };
        if (words[2] === "vlan") segment.vlan = Number(words[3]);
        segments.push(segment);
        current = null;
        break;
      }
      case "attach":
        attachments.push({ device: words[1], iface: words[2], segment: words[3] });
        current = null;
        break;
      default:
        throw new Error(`unrecognized topology line: ${line}`);
    }
  }
  return { devices, segments, attachments };
}
