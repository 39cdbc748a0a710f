/**
 * Map a DOM selection inside the reader to offsets in the server-provided
 * segment text. Offsets are computed against the container's textContent
 * (which the reader renders as exactly the segment text), never against
 * markup, so the server's substring validation always agrees.
 */

export interface SelectionOffsets {
  start: number;
  end: number;
  text: string;
}

function within(container: Node, node: Node): boolean {
  for (let current: Node | null = node; current; current = current.parentNode) {
    if (current === container) {
      return true;
    }
  }
  return false;
}

/** Absolute text offset of (node, offsetInNode) inside container, or null. */
function textOffset(container: Node, node: Node, offsetInNode: number): number | null {
  if (!within(container, node)) {
    return null;
  }
  let base = 0;
  if (node.nodeType !== Node.TEXT_NODE) {
    // Element boundary: offset counts child nodes; measure the text before it.
    let measured = 0;
    for (let i = 0; i < offsetInNode; i++) {
      measured += node.childNodes[i]?.textContent?.length ?? 0;
    }
    offsetInNode = measured;
  }
  const walk = (current: Node): boolean => {
    if (current === node) {
      return true;
    }
    if (current.nodeType === Node.TEXT_NODE) {
      base += current.textContent?.length ?? 0;
      return false;
    }
    for (const child of Array.from(current.childNodes)) {
      if (walk(child)) {
        return true;
      }
    }
    return false;
  };
  if (!walk(container)) {
    return null;
  }
  return base + offsetInNode;
}

/**
 * Offsets of `range` within `container`, or null when the selection is
 * empty or reaches outside the container (e.g. across segment boundaries).
 */
export function rangeOffsets(container: Node, range: Range): SelectionOffsets | null {
  const start = textOffset(container, range.startContainer, range.startOffset);
  const end = textOffset(container, range.endContainer, range.endOffset);
  if (start === null || end === null || start >= end) {
    return null;
  }
  const text = (container.textContent ?? '').slice(start, end);
  return { start, end, text };
}
