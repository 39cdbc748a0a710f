/** Query history side panel: the learner's review list, newest first. */

import { HistoryPage } from '../api.js';
import { clear, el } from './dom.js';

export class HistoryPanel {
  private readonly list: HTMLElement;
  private readonly counter: HTMLElement;

  constructor(private readonly root: HTMLElement) {
    this.list = el('ul', { class: 'history-list' });
    this.counter = el('span', { class: 'history-count' }, '0');
  }

  mount(): void {
    clear(this.root);
    this.root.append(
      el('h2', {}, 'Your lookups ', this.counter),
      this.list,
    );
  }

  show(page: HistoryPage): void {
    this.counter.textContent = String(page.total);
    clear(this.list);
    if (page.records.length === 0) {
      this.list.append(el('li', { class: 'history-empty' }, 'Highlight any text in the story to look it up.'));
      return;
    }
    for (const record of page.records) {
      this.list.append(
        el(
          'li',
          { class: 'history-item' },
          el('span', { class: 'history-word' }, record.selected_string),
          el('span', { class: 'history-explanation' }, record.explanation),
        ),
      );
    }
  }
}
