/**
 * Canvas-side data model and its mapping to the on-disk document formats.
 *
 * The editor works on CanvasTask/CanvasLink/ResourceRow objects; this module
 * converts them to and from the version-1 "dag" and "resources" documents the
 * server reads and writes. Unknown fields found in imported files are kept on
 * the objects and re-emitted on export, so a round trip through the editor
 * never drops data it does not understand.
 */

export const FORMAT_VERSION = 1;

export interface CanvasTask {
  id: number;
  name: string;
  lengthMi: number;
  // Canvas geometry, in CSS pixels. Imported files may omit positions;
  // importDag assigns a deterministic grid slot in that case.
  x: number;
  y: number;
  extra: Record<string, unknown>;
}

export interface CanvasLink {
  src: number;
  dst: number;
  bytes: number;
  extra: Record<string, unknown>;
}

export interface CanvasModel {
  name: string;
  tasks: CanvasTask[];
  links: CanvasLink[];
  extra: Record<string, unknown>;
}

export interface ResourceRow {
  name: string;
  architecture: string;
  timeZone: number;
  numMachines: number;
  pesPerMachine: number;
  peRatingMips: number;
  baudRateBps: number;
  costPerSec: number;
  extra: Record<string, unknown>;
}

/** Raised when an imported document cannot be mapped onto the canvas model. */
export class ModelParseError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ModelParseError";
  }
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function requireRecord(value: unknown, where: string): Record<string, unknown> {
  if (!isRecord(value)) {
    throw new ModelParseError(`${where}: expected an object`);
  }
  return value;
}

function requireArray(value: unknown, where: string): unknown[] {
  if (!Array.isArray(value)) {
    throw new ModelParseError(`${where}: expected an array`);
  }
  return value;
}

function finiteNumber(value: unknown, where: string): number {
  // JSON has no NaN/Infinity; booleans are not numbers here.
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new ModelParseError(`${where}: expected a finite number`);
  }
  return value;
}

function taskId(value: unknown, where: string): number {
  if (typeof value !== "number" || !Number.isInteger(value) || value <= 0) {
    throw new ModelParseError(`${where}: expected a positive integer id`);
  }
  return value;
}

function anyString(value: unknown, where: string): string {
  if (typeof value !== "string") {
    throw new ModelParseError(`${where}: expected a string`);
  }
  return value;
}

function nonEmptyString(value: unknown, where: string): string {
  if (typeof value !== "string" || value.length === 0) {
    throw new ModelParseError(`${where}: expected a non-empty string`);
  }
  return value;
}

function checkEnvelope(doc: Record<string, unknown>, kind: string): void {
  if (doc["format_version"] !== FORMAT_VERSION) {
    throw new ModelParseError(
      `unsupported format_version ${JSON.stringify(doc["format_version"])}; ` +
        `this build reads version ${FORMAT_VERSION}`,
    );
  }
  if (doc["kind"] !== kind) {
    throw new ModelParseError(
      `expected kind '${kind}', found ${JSON.stringify(doc["kind"])}`,
    );
  }
}

/** Collects fields not consumed by the importer, preserving their order. */
function extraFields(
  record: Record<string, unknown>,
  known: readonly string[],
): Record<string, unknown> {
  const extra: Record<string, unknown> = {};
  for (const [key, value] of Object.entries(record)) {
    if (!known.includes(key)) {
      extra[key] = value;
    }
  }
  return extra;
}

const TASK_FIELDS = ["id", "name", "length_mi", "x", "y"] as const;
const EDGE_FIELDS = ["src", "dst", "bytes"] as const;
const DAG_DOC_FIELDS = ["format_version", "kind", "name", "tasks", "edges"] as const;
const RESOURCE_FIELDS = [
  "name",
  "architecture",
  "time_zone",
  "num_machines",
  "pes_per_machine",
  "pe_rating_mips",
  "baud_rate_bps",
  "cost_per_sec",
] as const;
const RESOURCES_DOC_FIELDS = ["format_version", "kind", "resources"] as const;

/** Default slot for tasks imported without coordinates: a left-to-right grid. */
function gridSlot(index: number): { x: number; y: number } {
  return { x: 90 + (index % 5) * 130, y: 70 + Math.floor(index / 5) * 110 };
}

export function importDag(doc: unknown): CanvasModel {
  const record = requireRecord(doc, "document");
  checkEnvelope(record, "dag");
  // the server accepts empty names, so the importer must as well
  const name = anyString(record["name"], "document.name");
  const rawTasks = requireArray(record["tasks"], "document.tasks");
  const rawEdges = requireArray(record["edges"], "document.edges");

  const tasks: CanvasTask[] = [];
  const seen = new Set<number>();
  rawTasks.forEach((item, i) => {
    const where = `tasks[${i}]`;
    const t = requireRecord(item, where);
    const id = taskId(t["id"], `${where}.id`);
    if (seen.has(id)) {
      throw new ModelParseError(`${where}.id: duplicate task id ${id}`);
    }
    seen.add(id);
    const lengthMi = finiteNumber(t["length_mi"], `${where}.length_mi`);
    if (lengthMi <= 0) {
      throw new ModelParseError(`${where}.length_mi: must be positive`);
    }
    const slot = gridSlot(i);
    // x/y are optional in the file; null counts as absent.
    const x = t["x"] == null ? slot.x : finiteNumber(t["x"], `${where}.x`);
    const y = t["y"] == null ? slot.y : finiteNumber(t["y"], `${where}.y`);
    tasks.push({
      id,
      name: anyString(t["name"], `${where}.name`),
      lengthMi,
      x,
      y,
      extra: extraFields(t, TASK_FIELDS),
    });
  });

  // Self loops and duplicate pairs are NOT rejected here: the server parses
  // such files and reports them through validation, and the importer must
  // never refuse a document the server would accept.
  const links: CanvasLink[] = [];
  rawEdges.forEach((item, i) => {
    const where = `edges[${i}]`;
    const e = requireRecord(item, where);
    const src = taskId(e["src"], `${where}.src`);
    const dst = taskId(e["dst"], `${where}.dst`);
    for (const [field, id] of [["src", src], ["dst", dst]] as const) {
      if (!seen.has(id)) {
        throw new ModelParseError(`${where}.${field}: unknown task ${id}`);
      }
    }
    const bytes = finiteNumber(e["bytes"], `${where}.bytes`);
    if (bytes < 0) {
      throw new ModelParseError(`${where}.bytes: must be non-negative`);
    }
    links.push({ src, dst, bytes, extra: extraFields(e, EDGE_FIELDS) });
  });

  return {
    name,
    tasks,
    links,
    extra: extraFields(record, DAG_DOC_FIELDS),
  };
}

export function exportDag(model: CanvasModel): Record<string, unknown> {
  return {
    format_version: FORMAT_VERSION,
    kind: "dag",
    name: model.name,
    tasks: model.tasks.map((t) => ({
      id: t.id,
      name: t.name,
      length_mi: t.lengthMi,
      x: t.x,
      y: t.y,
      ...t.extra,
    })),
    edges: model.links.map((e) => ({
      src: e.src,
      dst: e.dst,
      bytes: e.bytes,
      ...e.extra,
    })),
    ...model.extra,
  };
}

export function importResources(doc: unknown): ResourceRow[] {
  const record = requireRecord(doc, "document");
  checkEnvelope(record, "resources");
  const raw = requireArray(record["resources"], "document.resources");
  return raw.map((item, i) => {
    const where = `resources[${i}]`;
    const r = requireRecord(item, where);
    const row: ResourceRow = {
      name: nonEmptyString(r["name"], `${where}.name`),
      architecture:
        r["architecture"] == null
          ? "generic"
          : anyString(r["architecture"], `${where}.architecture`),
      timeZone:
        r["time_zone"] == null
          ? 0.0
          : finiteNumber(r["time_zone"], `${where}.time_zone`),
      numMachines: finiteNumber(r["num_machines"], `${where}.num_machines`),
      pesPerMachine: finiteNumber(
        r["pes_per_machine"],
        `${where}.pes_per_machine`,
      ),
      peRatingMips: finiteNumber(
        r["pe_rating_mips"],
        `${where}.pe_rating_mips`,
      ),
      baudRateBps: finiteNumber(r["baud_rate_bps"], `${where}.baud_rate_bps`),
      costPerSec: finiteNumber(r["cost_per_sec"], `${where}.cost_per_sec`),
      extra: extraFields(r, RESOURCE_FIELDS),
    };
    const faults = validateResourceRow(row);
    if (faults.length > 0) {
      throw new ModelParseError(`${where}: ${faults.join("; ")}`);
    }
    return row;
  });
}

export function exportResources(rows: ResourceRow[]): Record<string, unknown> {
  return {
    format_version: FORMAT_VERSION,
    kind: "resources",
    resources: rows.map((r) => ({
      name: r.name,
      architecture: r.architecture,
      time_zone: r.timeZone,
      num_machines: r.numMachines,
      pes_per_machine: r.pesPerMachine,
      pe_rating_mips: r.peRatingMips,
      baud_rate_bps: r.baudRateBps,
      cost_per_sec: r.costPerSec,
      ...r.extra,
    })),
  };
}

/**
 * Field-level checks mirroring what the server enforces on registration.
 * Deliberately a subset: structural soundness only, no cross-row rules, so
 * anything the client accepts the server may still reject but never the
 * other way around.
 */
export function validateResourceRow(row: ResourceRow): string[] {
  const faults: string[] = [];
  if (row.name.length === 0) {
    faults.push("name must not be empty");
  }
  if (!Number.isInteger(row.numMachines) || row.numMachines < 1) {
    faults.push("num_machines must be an integer >= 1");
  }
  if (!Number.isInteger(row.pesPerMachine) || row.pesPerMachine < 1) {
    faults.push("pes_per_machine must be an integer >= 1");
  }
  if (!Number.isFinite(row.peRatingMips) || row.peRatingMips <= 0) {
    faults.push("pe_rating_mips must be positive");
  }
  if (!Number.isFinite(row.baudRateBps) || row.baudRateBps <= 0) {
    faults.push("baud_rate_bps must be positive");
  }
  if (!Number.isFinite(row.costPerSec) || row.costPerSec < 0) {
    faults.push("cost_per_sec must be non-negative");
  }
  return faults;
}

/** Serializes a document the same way every export path does. */
export function toFileText(doc: Record<string, unknown>): string {
  return JSON.stringify(doc, null, 2) + "\n";
}

export function parseFileText(text: string, where: string): unknown {
  if (text.trim().length === 0) {
    throw new ModelParseError(`${where}: empty input`);
  }
  try {
    return JSON.parse(text);
  } catch (err) {
    throw new ModelParseError(`${where}: ${(err as Error).message}`);
  }
}
