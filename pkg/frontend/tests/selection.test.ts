// @vitest-environment happy-dom
import { describe, expect, it } from 'vitest';

import { rangeOffsets } from '../src/selection.js';

const SEGMENT = 'The road narrows and the light fails. Something moves ahead.';

function readerWith(text: string): HTMLElement {
  const container = document.createElement('div');
  container.textContent = text;
  document.body.append(container);
  return container;
}

function rangeIn(node: Node, start: number, end: number): Range {
  const range = document.createRange();
  range.setStart(node, start);
  range.setEnd(node, end);
  return range;
}

describe('rangeOffsets', () => {
  it('maps a selection in a single text node to raw offsets', () => {
    const container = readerWith(SEGMENT);
    const textNode = container.firstChild!;
    const start = SEGMENT.indexOf('narrows');
    const offsets = rangeOffsets(container, rangeIn(textNode, start, start + 'narrows'.length));
    expect(offsets).not.toBeNull();
    expect(offsets!.start).toBe(start);
    expect(offsets!.text).toBe('narrows');
    expect(SEGMENT.slice(offsets!.start, offsets!.end)).toBe('narrows');
  });

  it('maps selections across nested elements', () => {
    const container = document.createElement('div');
    container.append('The road ');
    const em = document.createElement('em');
    em.textContent = 'narrows';
    container.append(em, ' and the light fails.');
    document.body.append(container);

    const range = document.createRange();
    range.setStart(container.firstChild!, 4); // "road ..."
    range.setEnd(em.firstChild!, 7); // end of "narrows"
    const offsets = rangeOffsets(container, range);
    expect(offsets).not.toBeNull();
    expect(offsets!.text).toBe('road narrows');
    expect(container.textContent!.slice(offsets!.start, offsets!.end)).toBe('road narrows');
  });

  it('rejects selections reaching outside the segment container', () => {
    const container = readerWith(SEGMENT);
    const outside = document.createElement('p');
    outside.textContent = 'Not part of the story.';
    document.body.append(outside);

    const range = document.createRange();
    range.setStart(container.firstChild!, 0);
    range.setEnd(outside.firstChild!, 3);
    expect(rangeOffsets(container, range)).toBeNull();
  });

  it('rejects empty selections', () => {
    const container = readerWith(SEGMENT);
    expect(rangeOffsets(container, rangeIn(container.firstChild!, 5, 5))).toBeNull();
  });

  it('handles element-boundary range endpoints', () => {
    const container = readerWith(SEGMENT);
    const range = document.createRange();
    range.setStart(container, 0); // element offsets, not text offsets
    range.setEnd(container, 1);
    const offsets = rangeOffsets(container, range);
    expect(offsets).not.toBeNull();
    expect(offsets!.text).toBe(SEGMENT);
  });
});
