// Builds a collapsible-tree description from the reflection object an
// `ast`-kind value event carries. Pure data in, pure data out; the DOM
// layer only walks the rows. Anything that does not look like a node
// yields null and the caller falls back to raw JSON.

export interface TreeRow {
  /** e.g. `BinaryExpression: operator=*` or `left: Identifier: name=y`. */
  label: string;
  children: TreeRow[];
}

interface NodeObject {
  type: string;
  [field: string]: unknown;
}

function isNodeObject(value: unknown): value is NodeObject {
  return (
    typeof value === 'object' &&
    value !== null &&
    !Array.isArray(value) &&
    typeof (value as { type?: unknown }).type === 'string'
  );
}

function scalarText(value: unknown): string {
  // Bare field=value reads best in a tree label, even for strings.
  return String(value);
}

function nodeRow(node: NodeObject, prefix: string): TreeRow {
  const scalars: string[] = [];
  const children: TreeRow[] = [];
  for (const [field, value] of Object.entries(node)) {
    if (field === 'type') {
      continue;
    }
    if (isNodeObject(value)) {
      children.push(nodeRow(value, `${field}: `));
    } else if (Array.isArray(value)) {
      value.forEach((element, index) => {
        if (isNodeObject(element)) {
          children.push(nodeRow(element, `${field}[${index}]: `));
        } else {
          children.push({ label: `${field}[${index}]: ${scalarText(element)}`, children: [] });
        }
      });
    } else if (value !== undefined) {
      scalars.push(`${field}=${scalarText(value)}`);
    }
  }
  const detail = scalars.length > 0 ? `: ${scalars.join(', ')}` : '';
  return { label: `${prefix}${node.type}${detail}`, children };
}

/** Null when the value is not a node object (caller shows a raw fallback). */
export function reflectionTree(value: unknown): TreeRow | null {
  return isNodeObject(value) ? nodeRow(value, '') : null;
}
