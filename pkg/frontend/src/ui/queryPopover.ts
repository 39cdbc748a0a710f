/**
 * Selection query flow: highlight text inside the reader and a little
 * question-mark icon appears next to the selection; clicking it asks the
 * assistant and shows the explanation in a popover. Selections that reach
 * outside the segment container are ignored.
 */

import { QueryRecord } from '../api.js';
import { rangeOffsets, SelectionOffsets } from '../selection.js';
import { el } from './dom.js';

export class QueryPopover {
  private readonly icon: HTMLButtonElement;
  private readonly bubble: HTMLElement;
  private pending: SelectionOffsets | null = null;

  constructor(
    private readonly container: HTMLElement,
    private readonly onQuery: (offsets: SelectionOffsets) => Promise<QueryRecord>,
  ) {
    this.icon = el('button', { class: 'query-icon hidden', title: 'Explain this' }, '?');
    this.bubble = el('div', { class: 'query-bubble hidden' });
    document.body.append(this.icon, this.bubble);
    this.icon.addEventListener('click', () => void this.ask());
    document.addEventListener('selectionchange', () => this.onSelectionChange());
  }

  private onSelectionChange(): void {
    const selection = document.getSelection();
    this.bubble.classList.add('hidden');
    if (!selection || selection.rangeCount === 0 || selection.isCollapsed) {
      this.hideIcon();
      return;
    }
    const range = selection.getRangeAt(0);
    const offsets = rangeOffsets(this.container, range);
    if (!offsets) {
      this.hideIcon(); // outside the segment (or crossing its boundary): reject quietly
      return;
    }
    this.pending = offsets;
    const rect = range.getBoundingClientRect();
    this.icon.style.left = `${window.scrollX + rect.right + 4}px`;
    this.icon.style.top = `${window.scrollY + rect.top - 4}px`;
    this.icon.classList.remove('hidden');
  }

  private hideIcon(): void {
    this.icon.classList.add('hidden');
    this.pending = null;
  }

  private async ask(): Promise<void> {
    if (!this.pending) {
      return;
    }
    const offsets = this.pending;
    const iconRect = this.icon.getBoundingClientRect();
    this.hideIcon();
    this.showBubble('Looking it up...', iconRect);
    try {
      const record = await this.onQuery(offsets);
      this.showBubble(record.explanation, iconRect);
    } catch (error) {
      this.showBubble(error instanceof Error ? error.message : 'Lookup failed.', iconRect);
    }
  }

  private showBubble(text: string, near: DOMRect): void {
    this.bubble.textContent = text;
    this.bubble.style.left = `${window.scrollX + near.left}px`;
    this.bubble.style.top = `${window.scrollY + near.bottom + 6}px`;
    this.bubble.classList.remove('hidden');
  }
}
